// cnlkit: command-line front end. Exit codes: 0 ok/yes, 1 no/unknown/no models, 2 error.
#include "cnlkit/asp.hpp"
#include "cnlkit/error.hpp"
#include "cnlkit/minmodel.hpp"
#include "cnlkit/service.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace cnl;
using json = nlohmann::json;

namespace {

struct Options {
    std::string lexicon = std::string(CNLKIT_DATA_DIR) + "/cnl/lexicon.pl";
    std::string grammar = std::string(CNLKIT_DATA_DIR) + "/cnl/cnl.grammar";
    std::string scales = std::string(CNLKIT_DATA_DIR) + "/cnl/scales.txt";
    std::string format = "text";
    std::size_t limit = 0;
    bool json() const { return format == "json"; }
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::validation, "cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::shared_ptr<const Resources> resources(const Options& o) { return Resources::load(o.lexicon, o.grammar, o.scales); }

// "%"-prefixed so the DRS can follow a program as LPDA comments.
std::string commented(const std::string& text) {
    std::istringstream in(text);
    std::string out;
    for (std::string l; std::getline(in, l);) out += "% " + l + "\n";
    return out;
}

std::string suggestions_line(const std::vector<Suggestion>& ss) {
    std::string out;
    for (const auto& s : ss) {
        out += out.empty() ? "" : " | ";
        out += s.category;
        if (!s.words.empty()) {
            out += " (";
            for (std::size_t i = 0; i < s.words.size(); ++i) out += (i ? ", " : "") + s.words[i];
            out += ")";
        }
    }
    return out;
}

int cmd_lex_check(const Options& o) {
    auto lex = load_lexicon_file(o.lexicon);
    auto g = load_grammar_file(o.grammar);
    // the serialized form must load back to the same lexicon
    bool round_trip = load_lexicon(lex.serialize()) == lex;
    std::vector<std::string> empty_pos;
    for (const auto& p : g.productions())
        for (const auto& sym : p.rhs)
            if (g.is_pos_category(sym) && sym != "num" && sym != "sid") {  // matched by token shape
                bool any = false;
                for (const auto& e : lex.entries())
                    if (pos_name(e.pos) == sym) any = true;
                if (!any && std::find(empty_pos.begin(), empty_pos.end(), sym) == empty_pos.end()) empty_pos.push_back(sym);
            }
    if (o.json()) {
        std::cout << json{{"entries", lex.entries().size()},
                          {"illegal", lex.illegal().size()},
                          {"synonym_classes", lex.synonym_class_count()},
                          {"productions", g.productions().size()},
                          {"warnings", lex.warnings()},
                          {"empty_categories", empty_pos},
                          {"round_trip", round_trip}}
                         .dump(2)
                  << "\n";
    } else {
        std::cout << "lexicon: " << lex.entries().size() << " entries, " << lex.illegal().size() << " illegal words, "
                  << lex.synonym_class_count() << " synonym classes\n";
        std::cout << "grammar: " << g.productions().size() << " productions\n";
        for (const auto& w : lex.warnings()) std::cout << "warning: " << w << "\n";
        for (const auto& c : empty_pos) std::cout << "warning: no lexicon entry for category " << c << "\n";
        if (!round_trip) std::cout << "error: serialized lexicon does not load back identically\n";
    }
    return round_trip ? 0 : 2;
}

int cmd_parse(const Options& o, const std::vector<std::string>& words) {
    auto res = resources(o);
    std::string text;
    for (const auto& w : words) text += (text.empty() ? "" : " ") + w;
    while (!text.empty() && (text.back() == '.' || text.back() == '?')) text.pop_back();
    auto tokens = tokenize(text, res->lexicon);
    Chart c = parse(res->grammar, res->lexicon, tokens);
    auto trees = extract_trees(c, o.limit ? o.limit : 64);
    auto next = lookahead(c, 8);
    if (o.json()) {
        json t = json::array(), s = json::array();
        for (const auto& x : trees) t.push_back(x.str());
        for (const auto& x : next) s.push_back({{"category", x.category}, {"words", x.words}});
        std::cout << json{{"tokens", tokens}, {"trees", t}, {"complete", sentence_complete(c)}, {"next", s}}.dump(2)
                  << "\n";
    } else {
        for (const auto& x : trees) std::cout << x.str() << "\n";
        if (trees.empty()) std::cout << "no complete parse\n";
        if (!next.empty()) std::cout << "next: " << suggestions_line(next) << "\n";
    }
    return trees.empty() ? 1 : 0;
}

int cmd_translate(const Options& o, const std::string& path, bool drs) {
    auto res = resources(o);
    auto doc = process_document(read_file(path), res->lexicon, res->grammar);
    auto t = translate(doc, res->scales);
    if (o.json()) {
        std::cout << json{{"program", t.text()}, {"drs", print_discourse(doc.discourse)}, {"notices", t.notices}}.dump(2)
                  << "\n";
        return 0;
    }
    std::cout << t.text();
    for (const auto& n : t.notices) std::cout << "% notice: " << n << "\n";
    if (drs && !doc.records.empty()) std::cout << "\n" << commented(print_discourse(doc.discourse));
    return 0;
}

int exit_for(const Answer& a) {
    if (!a.result.ground && !a.result.answers.empty()) return 0;
    return a.result.status == lpda::QueryResult::Status::yes ? 0 : 1;
}

int cmd_ask(const Options& o, const std::string& path, const std::string& query) {
    Session s(resources(o));
    s.load(read_file(path));
    auto a = ask(*s.snapshot(), s.resources(), query);
    std::cout << (o.json() ? json::parse(to_json(a)).dump(2) + "\n" : render_answer(a));
    return exit_for(a);
}

int cmd_asp(const Options& o, const std::string& path, const std::string& query) {
    auto g = asp::ground(asp::parse_asp(read_file(path)));
    auto models = asp::stable_models(g, query.empty() ? o.limit : 0);
    if (!query.empty()) {
        auto ans = asp::asp_query(g, models, asp::parse_query(query));
        if (o.json())
            std::cout << json{{"query", query}, {"answer", asp::answer_name(ans)}, {"models", models.size()}}.dump(2) << "\n";
        else
            std::cout << asp::answer_name(ans) << "\n";
        return ans == asp::Answer::yes ? 0 : 1;
    }
    if (o.json()) {
        json ms = json::array();
        for (const auto& m : models) {
            json atoms = json::array();
            for (const auto& t : asp::render(g, m)) atoms.push_back(lpda::print_term(t));
            ms.push_back(std::move(atoms));
        }
        std::cout << json{{"models", ms}}.dump(2) << "\n";
    } else {
        for (std::size_t i = 0; i < models.size(); ++i)
            std::cout << "Answer " << i + 1 << ": " << asp::render_line(g, models[i]) << "\n";
        std::cout << (models.empty() ? "UNSATISFIABLE" : "SATISFIABLE") << "\n";
    }
    return models.empty() ? 1 : 0;
}

int cmd_circ(const Options& o, const std::string& path, const std::vector<std::string>& formulas, bool reference) {
    auto t = circ::parse_theory(read_file(path));
    auto models = reference ? circ::minimal_models_reference(t) : circ::minimal_models(t);
    std::vector<std::pair<std::string, bool>> verdicts;
    for (const auto& f : formulas) verdicts.emplace_back(f, circ::circ_entails(t, f));
    if (o.json()) {
        json ms = json::array(), vs = json::object();
        for (auto m : models) ms.push_back(t.true_atoms(m));
        for (const auto& [f, v] : verdicts) vs[f] = v;
        std::cout << json{{"minimal_models", ms}, {"entails", vs}}.dump(2) << "\n";
    } else {
        for (auto m : models) {
            std::cout << "{";
            auto atoms = t.true_atoms(m);
            for (std::size_t i = 0; i < atoms.size(); ++i) std::cout << (i ? ", " : "") << atoms[i];
            std::cout << "}\n";
        }
        for (const auto& [f, v] : verdicts) std::cout << f << ": " << (v ? "entailed" : "not entailed") << "\n";
    }
    for (const auto& [f, v] : verdicts)
        if (!v) return 1;
    return 0;
}

void repl_help() {
    std::cout << "Type words; suggestions follow each line. End a sentence with '.' to commit it,\n"
                 "with '?' to ask. Commands: :program :drs :sentences :save FILE :load FILE :reset :quit\n";
}

int cmd_repl(const Options& o, const std::string& path) {
    Session s(resources(o));
    if (!path.empty()) s.load(read_file(path));
    const auto& res = s.resources();
    std::string buffer;
    repl_help();
    auto prompt = [&] { std::cout << (buffer.empty() ? "> " : ". ") << std::flush; };
    prompt();
    for (std::string line; std::getline(std::cin, line); prompt()) {
        try {
            if (buffer.empty() && !line.empty() && line[0] == ':') {
                std::istringstream in(line);
                std::string cmd, arg;
                in >> cmd >> arg;
                if (cmd == ":quit" || cmd == ":q") break;
                if (cmd == ":program") std::cout << s.current()->translation.text();
                else if (cmd == ":drs") std::cout << print_discourse(s.current()->document.discourse);
                else if (cmd == ":sentences") std::cout << s.text();
                else if (cmd == ":reset") s.clear();
                else if (cmd == ":save") {
                    std::ofstream(arg) << s.save() << "\n";
                    std::cout << "saved " << arg << "\n";
                } else if (cmd == ":load") {
                    s.restore(read_file(arg));
                    std::cout << s.current()->document.records.size() << " sentences\n";
                } else repl_help();
                continue;
            }
            const std::string before = buffer;
            buffer += (buffer.empty() ? "" : " ") + line;
            while (!buffer.empty() && std::isspace(static_cast<unsigned char>(buffer.back()))) buffer.pop_back();
            if (buffer.empty()) continue;
            if (buffer.back() == '.') {
                std::string text = buffer;
                buffer.clear();
                auto [rec, frag] = s.add(text, "");
                std::cout << rec.id << " (" << mode_name(rec.mode) << ")\n" << frag;
            } else if (buffer.back() == '?') {
                std::string q = buffer;
                buffer.clear();
                std::cout << render_answer(ask(*s.snapshot(), res, q));
            } else {
                auto raw = split_document(buffer);
                auto tokens = raw.empty() ? std::vector<std::string>{} : tokenize(raw[0].body, res.lexicon);
                try {
                    Chart c = parse(res.grammar, res.lexicon, tokens);
                    auto next = lookahead(c, o.limit ? o.limit : 8);
                    if (next.empty() && !sentence_complete(c)) {
                        buffer = before;
                        std::cout << "no sentence continues that way; dropped \"" << line << "\"\n";
                        continue;
                    }
                    if (sentence_complete(c)) std::cout << "(complete; '.' commits)\n";
                    if (!next.empty()) std::cout << "next: " << suggestions_line(next) << "\n";
                } catch (const Error&) {
                    buffer = before;
                    throw;
                }
            }
        } catch (const Error& e) {
            std::cout << "error [" << errc_name(e.code()) << "]: " << e.what() << "\n";
        }
    }
    std::cout << "\n";
    return 0;
}

HttpServer* g_server = nullptr;

int cmd_serve(const Options& o, const std::string& host, int port) {
    Service svc(resources(o));
    HttpServer server(svc);
    int bound = server.bind(host, port);
    g_server = &server;
    std::signal(SIGINT, [](int) {
        if (g_server) g_server->stop();
    });
    std::cerr << "listening on http://" << host << ":" << bound << "\n";
    server.run();
    g_server = nullptr;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Controlled-English knowledge toolkit"};
    app.require_subcommand(1);
    Options o;
    app.add_option("--lexicon", o.lexicon, "lexicon file")->check(CLI::ExistingFile);
    app.add_option("--grammar", o.grammar, "grammar file")->check(CLI::ExistingFile);
    app.add_option("--scales", o.scales, "implicature scale table")->check(CLI::ExistingFile);
    app.add_option("--format", o.format, "output format")->check(CLI::IsMember({"text", "json"}));
    app.add_option("--limit", o.limit, "max trees, models or suggestions (0 = default)");

    auto* lex = app.add_subcommand("lex", "lexicon tools");
    lex->require_subcommand(1);
    auto* lex_check = lex->add_subcommand("check", "load and validate lexicon and grammar");

    std::vector<std::string> words;
    auto* parse_cmd = app.add_subcommand("parse", "parse one sentence and show continuations");
    parse_cmd->add_option("words", words, "sentence words")->required();

    std::string doc_path;
    bool no_drs = false;
    auto* translate_cmd = app.add_subcommand("translate", "document to LPDA program and DRS");
    translate_cmd->add_option("document", doc_path)->required()->check(CLI::ExistingFile);
    translate_cmd->add_flag("--no-drs", no_drs, "program only");

    std::string query;
    auto* ask_cmd = app.add_subcommand("ask", "query a document in CNL (ending in ?) or literal syntax");
    ask_cmd->add_option("document", doc_path)->required()->check(CLI::ExistingFile);
    ask_cmd->add_option("query", query)->required();

    auto* asp_cmd = app.add_subcommand("asp", "answer set programs");
    asp_cmd->require_subcommand(1);
    auto* solve = asp_cmd->add_subcommand("solve", "enumerate answer sets");
    std::string program_path;
    solve->add_option("program", program_path)->required()->check(CLI::ExistingFile);
    solve->add_option("--query", query, "cautious/brave query, e.g. \"-care(john,sam)\"");

    std::vector<std::string> formulas;
    bool reference = false;
    auto* circ_cmd = app.add_subcommand("circ", "minimal models of a ground theory");
    circ_cmd->add_option("theory", program_path)->required()->check(CLI::ExistingFile);
    circ_cmd->add_option("--entails", formulas, "formula to test under circumscription");
    circ_cmd->add_flag("--reference", reference, "use the serial reference enumerator");

    auto* repl_cmd = app.add_subcommand("repl", "interactive sentence entry with lookahead");
    repl_cmd->add_option("document", doc_path)->check(CLI::ExistingFile);

    std::string host = "127.0.0.1";
    int port = 8080;
    auto* serve_cmd = app.add_subcommand("serve", "JSON service");
    serve_cmd->add_option("--host", host);
    serve_cmd->add_option("--port", port)->check(CLI::Range(0, 65535));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (lex_check->parsed()) return cmd_lex_check(o);
        if (parse_cmd->parsed()) return cmd_parse(o, words);
        if (translate_cmd->parsed()) return cmd_translate(o, doc_path, !no_drs);
        if (ask_cmd->parsed()) return cmd_ask(o, doc_path, query);
        if (solve->parsed()) return cmd_asp(o, program_path, query);
        if (circ_cmd->parsed()) return cmd_circ(o, program_path, formulas, reference);
        if (repl_cmd->parsed()) return cmd_repl(o, doc_path);
        if (serve_cmd->parsed()) return cmd_serve(o, host, port);
    } catch (const Error& e) {
        std::cerr << "error [" << errc_name(e.code()) << "]: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
