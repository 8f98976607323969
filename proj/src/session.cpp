#include "cnlkit/session.hpp"

#include "cnlkit/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <sstream>

namespace cnl {

namespace {

std::string rtrim(std::string s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    return s;
}

std::string ltrim(std::string_view s) {
    std::size_t a = 0;
    while (a < s.size() && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    return std::string(s.substr(a));
}

// "9.m rest" -> {"9.m", "rest"}; no id -> {"", text}.
std::pair<std::string, std::string> split_id(const std::string& text) {
    auto sp = text.find_first_of(" \t");
    if (sp != std::string::npos && is_sid_token(text.substr(0, sp))) return {text.substr(0, sp), ltrim(text.substr(sp))};
    return {"", text};
}

} // namespace

std::shared_ptr<const Resources> Resources::load(std::string lexicon_path, std::string grammar_path,
                                                 std::string scales_path) {
    auto r = std::make_shared<Resources>(Resources{lexicon_path, grammar_path, scales_path,
                                                   load_lexicon_file(lexicon_path), load_grammar_file(grammar_path),
                                                   scales_path.empty() ? ScaleTable{} : load_scales_file(scales_path)});
    return r;
}

std::shared_ptr<const Resources> Resources::load_default() {
    const std::string dir = std::string(CNLKIT_DATA_DIR) + "/cnl/";
    return load(dir + "lexicon.pl", dir + "cnl.grammar", dir + "scales.txt");
}

Snapshot::Snapshot(Document d, Translation t)
    : document(std::move(d)), translation(std::move(t)), engine(translation.program) {}

Answer ask(const Snapshot& s, const Resources& r, std::string_view query) {
    std::string q = rtrim(ltrim(query));
    if (q.empty()) throw Error(Errc::parse, "empty query");
    Answer a;
    std::vector<lpda::BodyItem> goal;
    if (q.back() == '?') {
        a.question = true;
        goal = question_goal(process_question(s.document, q, r.lexicon, r.grammar));
    } else {
        if (q.back() == '.') q.pop_back();
        goal = lpda::parse_goal(q);
    }
    for (const auto& item : goal) {
        if (!a.goal.empty()) a.goal += ", ";
        if (const auto* l = std::get_if<lpda::Literal>(&item))
            a.goal += (l->naf ? "not " : "") + lpda::print_term(l->atom);
        else if (const auto* b = std::get_if<lpda::Builtin>(&item))
            a.goal += lpda::print_term(b->lhs) + b->op + lpda::print_term(b->rhs);
    }
    a.result = s.engine.query(goal);
    return a;
}

std::string render_answer(const Answer& a) {
    std::ostringstream os;
    const auto& r = a.result;
    auto prov = [&](const std::vector<lpda::Provenance>& ps) {
        std::string out;
        for (const auto& p : ps) {
            if (p.label.empty() && p.source.empty()) continue;
            out += out.empty() ? "  [" : ", ";
            out += p.label.empty() ? "strict" : p.label;
            if (!p.source.empty()) out += "/" + p.source;
        }
        return out.empty() ? out : out + "]";
    };
    if (r.ground || r.answers.empty()) {
        os << lpda::status_name(r.status);
        if (!r.provenance.empty()) os << prov(r.provenance[0]);
        os << "\n";
    } else {
        for (std::size_t i = 0; i < r.answers.size(); ++i) {
            bool first = true;
            for (const auto& [v, t] : r.answers[i]) {
                os << (first ? "" : ", ") << v << " = " << lpda::print_term(t);
                first = false;
            }
            os << prov(r.provenance[i]) << "\n";
        }
    }
    if (r.undefined_instances && !r.ground) os << r.undefined_instances << " undecided instance(s)\n";
    if (r.inconsistent) os << "warning: the knowledge base is inconsistent\n";
    return os.str();
}

Drs fragment(const Document& d, const SentenceRecord& r) {
    Drs out;
    for (const auto& label : d.discourse.root.universe) {
        const Referent* ref = d.discourse.find(label);
        if (ref && ref->sid == r.id) out.universe.push_back(label);
    }
    const auto& cs = d.discourse.root.conditions;
    for (std::size_t i = r.cond_begin; i < r.cond_end && i < cs.size(); ++i) out.conditions.push_back(cs[i]);
    return out;
}

Session::Session(std::shared_ptr<const Resources> res) : res_(std::move(res)) {}

std::string Session::text() const {
    std::string out;
    for (const auto& l : lines_) out += l + "\n";
    return out;
}

void Session::load(std::string_view text) {
    auto doc = process_document(text, res_->lexicon, res_->grammar);
    std::vector<std::string> lines;
    // keep comments and paragraph breaks verbatim
    std::istringstream in{std::string(text)};
    for (std::string l; std::getline(in, l);) lines.push_back(rtrim(l));
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    auto t = translate(doc, res_->scales);
    lines_ = std::move(lines);
    for (const auto& r : doc.records) issued_.insert(r.id);
    cache_ = std::make_shared<const Snapshot>(std::move(doc), std::move(t));
}

std::pair<SentenceRecord, std::string> Session::add(std::string_view sentence, std::string_view annotation) {
    auto [id, body] = split_id(rtrim(ltrim(sentence)));
    if (body.empty()) throw Error(Errc::parse, "empty sentence");
    if (body.back() != '.') body += '.';
    const std::string note = rtrim(ltrim(annotation));
    auto line = [&](const std::string& sid) {
        return (sid.empty() ? "" : sid + " ") + (note.empty() ? "" : "(" + note + ") ") + body;
    };
    const std::string before = text();
    const std::size_t expected = split_document(before).size() + 1;
    auto process = [&](const std::string& l) {
        auto doc = process_document(before + l + "\n", res_->lexicon, res_->grammar);
        if (doc.records.empty() || doc.records.back().text.empty())
            throw Error(Errc::parse, "expected one sentence");
        return doc;
    };
    auto doc = process(line(id));
    if (doc.records.size() != expected) throw Error(Errc::parse, "expected exactly one sentence, got '" + body + "'");
    if (id.empty()) {
        // freeze the positional id; a fresh one if it was handed out before
        id = doc.records.back().id;
        if (issued_.count(id)) {
            const auto dot = id.find(".s");
            const std::string para = id.substr(0, dot);
            int k = std::stoi(id.substr(dot + 2));
            while (issued_.count(para + ".s" + std::to_string(k))) ++k;
            id = para + ".s" + std::to_string(k);
        }
        doc = process(line(id));
    } else if (issued_.count(id)) {
        throw Error(Errc::validation, "sentence id " + id + " was already used in this session");
    }
    auto t = translate(doc, res_->scales);
    lines_.push_back(line(id));
    issued_.insert(id);
    SentenceRecord rec = doc.records.back();
    std::string frag = print_drs(fragment(doc, rec));
    cache_ = std::make_shared<const Snapshot>(std::move(doc), std::move(t));
    return {std::move(rec), std::move(frag)};
}

void Session::clear() {
    lines_.clear();
    cache_.reset();
}

std::shared_ptr<const Snapshot> Session::current() {
    if (!cache_) {
        auto doc = process_document(text(), res_->lexicon, res_->grammar);
        auto t = translate(doc, res_->scales);
        cache_ = std::make_shared<const Snapshot>(std::move(doc), std::move(t));
    }
    return cache_;
}

std::shared_ptr<const Snapshot> Session::snapshot() {
    auto s = current();
    if (s->document.records.empty()) throw Error(Errc::no_knowledge_base, "no knowledge base loaded");
    return s;
}

std::string Session::save() const {
    nlohmann::json j;
    j["sentences"] = lines_;
    j["issued"] = issued_;
    return j.dump(2);
}

void Session::restore(std::string_view json) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json);
        auto lines = j.at("sentences").get<std::vector<std::string>>();
        auto issued = j.value("issued", std::set<std::string>{});
        std::string text;
        for (const auto& l : lines) text += l + "\n";
        load(text);
        issued_.insert(issued.begin(), issued.end());
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::parse, std::string("session file: ") + e.what());
    }
}

} // namespace cnl
