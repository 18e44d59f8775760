// lexguard command-line front end: one subcommand per module, JSON on
// standard output, diagnostics on standard error.
//
// Exit codes: 0 success, 1 usage or input error, 2 guard verdict BlockCopy.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include <lexguard/citation.hpp>
#include <lexguard/config.hpp>
#include <lexguard/ensemble.hpp>
#include <lexguard/factstore.hpp>
#include <lexguard/guard.hpp>
#include <lexguard/segmenter.hpp>
#include <lexguard/tokenizer.hpp>
#include <lexguard/verifier.hpp>

namespace {

using json = nlohmann::ordered_json;
using namespace lexguard;

constexpr const char* kVersion = "lexguard 0.1.0";

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string fixed4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

const char* sentinel_name(tok::Sentinel s) {
    switch (s) {
    case tok::Sentinel::EOP: return "EOP";
    case tok::Sentinel::SOC: return "SOC";
    case tok::Sentinel::EOC: return "EOC";
    case tok::Sentinel::SOF: return "SOF";
    }
    return "";
}

// `WORD <text>` / `QUOTE <id> <len-words>` / `SENT <kind>`
void print_token_stream(std::ostream& os, const tok::TokenSeq& seq) {
    for (const auto& t : seq.tokens) {
        switch (t.kind) {
        case tok::Token::Kind::Word: os << "WORD " << t.text << "\n"; break;
        case tok::Token::Kind::Quote:
            os << "QUOTE " << t.quote_id << " " << t.quote_words << "\n";
            break;
        case tok::Token::Kind::Sentinel:
            os << "SENT " << sentinel_name(t.sentinel) << "\n";
            break;
        }
    }
}

json citation_fields(const cite::Citation& c) {
    json f;
    f["party1"] = c.party1;
    f["party2"] = c.party2;
    if (c.year) f["year"] = *c.year;
    if (c.round_year) f["round_year"] = true;
    if (c.volume) f["volume"] = *c.volume;
    if (c.series) {
        f["series"] = *c.series == cite::Series::Other
                          ? c.series_other
                          : std::string(cite::series_label(*c.series));
    }
    if (c.page) f["page"] = *c.page;
    if (c.pinpoint) {
        f["pinpoint"] = {
            {"kind", c.pinpoint->kind == cite::Pinpoint::Kind::Para ? "para" : "page"},
            {"value", c.pinpoint->value}};
    }
    return f;
}

json span_record(std::string_view text, const cite::CitationSpan& sp) {
    json r;
    r["start"] = sp.begin;
    r["end"] = sp.end;
    r["raw"] = std::string(text.substr(sp.begin, sp.end - sp.begin));
    r["key"] = cite::canonical_key(sp.citation);
    r["fields"] = citation_fields(sp.citation);
    return r;
}

facts::FactStore load_store(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open fact store '" + path + "'");
    auto store = facts::FactStore::load_jsonl(in);
    store.freeze();
    return store;
}

// Threshold knobs shared by verify/eval. Values stay strings so the config
// module does all validation, whichever source they came from.
struct ThresholdFlags {
    std::string config_path, s_max, j_min, gap_max, stopwords;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "flat key = value config file");
        cmd->add_option("--s-max", s_max, "close-verbatim substitution ceiling (0..0.5)");
        cmd->add_option("--j-min", j_min, "semantic-intent Jaccard floor (0..1)");
        cmd->add_option("--gap-max", gap_max, "words one ellipsis gap may absorb (0..50)");
        cmd->add_option("--stopwords", stopwords, "stopword list file, one word per line");
    }

    config::Config resolve() const {
        config::Config cfg;
        if (!config_path.empty()) {
            std::ifstream f(config_path);
            if (!f) throw std::runtime_error("cannot open config '" + config_path + "'");
            cfg = config::load_file(f);
        }
        if (!s_max.empty()) config::set_value(cfg, "s_max", s_max);
        if (!j_min.empty()) config::set_value(cfg, "j_min", j_min);
        if (!gap_max.empty()) config::set_value(cfg, "gap_max", gap_max);
        if (!stopwords.empty()) cfg.stopwords_path = stopwords;
        if (!cfg.stopwords_path.empty()) {
            std::ifstream f(cfg.stopwords_path);
            if (!f)
                throw std::runtime_error("cannot open stopword list '" + cfg.stopwords_path +
                                         "'");
            cfg.thresholds.stopwords = config::load_stopwords(f);
        }
        return cfg;
    }
};

json scores_json(const verify::Scores& s) {
    return {{"substitution_rate", s.substitution_rate},
            {"jaccard", s.jaccard},
            {"ref_in_cand", s.ref_in_cand},
            {"cand_in_ref", s.cand_in_ref}};
}

const char* edit_kind_name(verify::EditKind k) {
    switch (k) {
    case verify::EditKind::Substitute: return "substitute";
    case verify::EditKind::Insert: return "insert";
    case verify::EditKind::Delete: return "delete";
    }
    return "";
}

std::string join(const std::vector<std::string>& words) {
    std::string out;
    for (const auto& w : words) {
        if (!out.empty()) out += ' ';
        out += w;
    }
    return out;
}

int cmd_parse_citations(const std::string& in_path) {
    const std::string text = slurp(in_path);
    json arr = json::array();
    for (const auto& sp : cite::detect_citations(text)) arr.push_back(span_record(text, sp));
    std::cout << arr.dump(2) << "\n";
    return 0;
}

int cmd_facts_list(const std::string& store_path) {
    std::ifstream in(store_path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open fact store '" + store_path + "'");
    auto store = facts::FactStore::load_jsonl(in);
    store.save_jsonl(std::cout); // output is itself a valid store file
    return 0;
}

int cmd_facts_add(const std::string& store_path, facts::FactQuote quote) {
    facts::FactStore store;
    {
        std::ifstream in(store_path, std::ios::binary);
        if (in) store = facts::FactStore::load_jsonl(in);
    }
    store.insert(quote);
    std::ofstream out(store_path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write fact store '" + store_path + "'");
    store.save_jsonl(out);

    json r;
    r["id"] = quote.id;
    r["key"] = quote.key;
    if (quote.pin) r["pin"] = *quote.pin;
    r["text"] = quote.text;
    r["source_case"] = quote.source_case;
    std::cout << r.dump() << "\n";
    return 0;
}

int cmd_tokenize(const std::string& in_path, const std::string& facts_path) {
    const std::string text = slurp(in_path);
    if (facts_path.empty()) {
        print_token_stream(std::cout, tok::tokenize(text));
    } else {
        auto store = load_store(facts_path);
        print_token_stream(std::cout, tok::tokenize(text, &store));
    }
    return 0;
}

int cmd_segment(const std::string& in_path, const std::string& facts_path) {
    const std::string text = slurp(in_path);
    facts::FactStore store;
    if (!facts_path.empty()) store = load_store(facts_path);
    auto res = seg::segment(text, facts_path.empty() ? nullptr : &store);
    for (const auto& s : res.segments) {
        json r;
        switch (s.kind) {
        case seg::SegKind::Problem: r["kind"] = "problem"; break;
        case seg::SegKind::Commentary: r["kind"] = "commentary"; break;
        case seg::SegKind::Fact: r["kind"] = "fact"; break;
        }
        r["start"] = s.begin;
        r["end"] = s.end;
        if (s.bound_key) r["key"] = *s.bound_key;
        std::cout << r.dump() << "\n";
    }
    print_token_stream(std::cout, res.tokens);
    return 0;
}

int cmd_ensemble(const std::string& facts_path, const std::string& problem_path,
                 const std::string& script_path, bool full_scan) {
    auto store = load_store(facts_path);
    ensemble::ScriptedGenerator gen(slurp(script_path));
    ensemble::PipelineOptions opts;
    opts.scan_full_commentary = full_scan;
    auto trace = ensemble::run_pipeline(slurp(problem_path), gen, store, opts);
    for (const auto& e : trace.events) {
        json r;
        r["event"] = std::string(ensemble::event_kind_name(e.kind));
        if (e.kind == ensemble::Event::Kind::HandOff) {
            r["from"] = std::string(ensemble::role_name(e.from));
            r["to"] = std::string(ensemble::role_name(e.to));
        }
        if (!e.key.empty()) r["key"] = e.key;
        if (!e.quote_id.empty()) r["quote_id"] = e.quote_id;
        r["text"] = e.text;
        std::cout << r.dump() << "\n";
    }
    return 0;
}

int cmd_verify(const std::string& ref_path, const std::string& cand_path,
               const ThresholdFlags& tf) {
    const auto cfg = tf.resolve();
    auto res = verify::classify_match(slurp(ref_path), slurp(cand_path), cfg.thresholds);
    json out;
    out["category"] = std::string(verify::category_label(res.category));
    out["scores"] = scores_json(res.scores);
    json edits = json::array();
    for (const auto& e : res.edits) {
        edits.push_back({{"kind", edit_kind_name(e.kind)},
                         {"position", e.position},
                         {"ref", join(e.ref_display)},
                         {"cand", join(e.cand_display)}});
    }
    out["edits"] = std::move(edits);
    std::cout << out.dump(2) << "\n";
    return 0;
}

void print_eval_table(std::ostream& os, const verify::EvalReport& rep) {
    std::size_t idw = 4;
    for (const auto& r : rep.rows) idw = std::max(idw, r.id.size());
    auto pad = [](std::string s, std::size_t w) {
        while (s.size() < w) s += ' ';
        return s;
    };

    os << pad("id", idw) << "  " << pad("mode", 12) << "  " << pad("assigned", 16) << "  "
       << pad("paper", 16) << "  " << pad("jaccard", 7) << "  agree\n";
    for (const auto& r : rep.rows) {
        os << pad(r.id, idw) << "  " << pad(std::string(verify::mode_name(r.mode)), 12)
           << "  " << pad(std::string(verify::category_label(r.assigned)), 16) << "  "
           << pad(std::string(verify::category_label(r.paper_label)), 16) << "  "
           << pad(fixed4(r.scores.jaccard), 7) << "  " << (r.agrees ? "yes" : "no") << "\n";
    }

    os << "\n"
       << pad("", 8) << "  " << pad("verbatim", 9) << "  " << pad("close_verbatim", 14)
       << "  " << pad("semantic_intent", 15) << "  unrelated_intent\n";
    auto count_row = [&](const char* name,
                         const std::array<std::size_t, verify::kCategoryCount>& c) {
        os << pad(name, 8) << "  " << pad(std::to_string(c[0]), 9) << "  "
           << pad(std::to_string(c[1]), 14) << "  " << pad(std::to_string(c[2]), 15) << "  "
           << std::to_string(c[3]) << "\n";
    };
    count_row("assigned", rep.assigned_counts);
    count_row("paper", rep.label_counts);
    os << "agreement " << rep.agreement << "/" << rep.total << "\n";
}

json eval_report_json(const verify::EvalReport& rep, const verify::Thresholds& th) {
    json out;
    out["total"] = rep.total;
    out["agreement"] = rep.agreement;
    out["thresholds"] = {
        {"s_max", th.s_max}, {"j_min", th.j_min}, {"gap_max", th.gap_max}};
    auto counts = [](const std::array<std::size_t, verify::kCategoryCount>& c) {
        json j;
        for (std::size_t i = 0; i < verify::kCategoryCount; ++i)
            j[std::string(verify::category_label(
                static_cast<verify::MatchCategory>(i)))] = c[i];
        return j;
    };
    out["counts"] = {{"assigned", counts(rep.assigned_counts)},
                     {"paper", counts(rep.label_counts)}};
    json rows = json::array();
    for (const auto& r : rep.rows) {
        rows.push_back({{"id", r.id},
                        {"title", r.case_title},
                        {"mode", std::string(verify::mode_name(r.mode))},
                        {"assigned", std::string(verify::category_label(r.assigned))},
                        {"paper_label", std::string(verify::category_label(r.paper_label))},
                        {"agrees", r.agrees},
                        {"jaccard", r.scores.jaccard},
                        {"substitution_rate", r.scores.substitution_rate},
                        {"edits", r.edit_count},
                        {"edit_cost", r.edit_cost}});
    }
    out["cases"] = std::move(rows);
    return out;
}

int cmd_eval(const std::string& corpus_path, const std::string& report_path,
             unsigned jobs, const ThresholdFlags& tf) {
    const auto cfg = tf.resolve();
    std::ifstream in(corpus_path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open corpus '" + corpus_path + "'");
    auto cases = verify::load_eval_cases(in);
    auto rep = verify::evaluate_corpus(cases, cfg.thresholds, jobs == 0 ? 1 : jobs);
    print_eval_table(std::cout, rep);
    if (!report_path.empty()) {
        std::ofstream out(report_path, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write report '" + report_path + "'");
        out << eval_report_json(rep, cfg.thresholds).dump(2) << "\n";
    }
    return 0;
}

int cmd_guard(const std::string& in_path) {
    const std::string text = slurp(in_path);
    auto d = guard::scan_output(text);
    json out;
    out["verdict"] = std::string(guard::verdict_name(d.verdict));
    out["message"] = d.message;
    json reasons = json::array();
    for (const auto& sp : d.reasons) {
        reasons.push_back({{"start", sp.begin},
                           {"end", sp.end},
                           {"raw", std::string(text.substr(sp.begin, sp.end - sp.begin))},
                           {"key", cite::canonical_key(sp.citation)}});
    }
    out["reasons"] = std::move(reasons);
    std::cout << out.dump(2) << "\n";
    return d.verdict == guard::Verdict::BlockCopy ? 2 : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quote-integrity tooling for generated legal text"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    // parse-citations
    std::string pc_in;
    auto* pc = app.add_subcommand("parse-citations", "detect citations in a text file");
    pc->add_option("--in", pc_in, "input text file")->required();

    // facts add|list
    auto* facts_cmd = app.add_subcommand("facts", "inspect or extend a fact store");
    facts_cmd->require_subcommand(1);
    std::string fa_store;
    facts::FactQuote fa_quote;
    int fa_pin = 0;
    auto* fadd = facts_cmd->add_subcommand("add", "append one quote to the store");
    fadd->add_option("--store", fa_store, "fact store JSONL file")->required();
    fadd->add_option("--id", fa_quote.id, "unique quote id")->required();
    fadd->add_option("--key", fa_quote.key, "canonical citation key")->required();
    fadd->add_option("--text", fa_quote.text, "verbatim quote text")->required();
    fadd->add_option("--source-case", fa_quote.source_case, "case the quote is from")
        ->required();
    auto* fa_pin_opt = fadd->add_option("--pin", fa_pin, "page or paragraph pinpoint");
    std::string fl_store;
    auto* flist = facts_cmd->add_subcommand("list", "print the store as JSON lines");
    flist->add_option("--store", fl_store, "fact store JSONL file")->required();

    // tokenize
    std::string tk_in, tk_facts;
    auto* tk = app.add_subcommand("tokenize", "emit the quote-atomic token stream");
    tk->add_option("--in", tk_in, "input text file")->required();
    tk->add_option("--facts", tk_facts, "fact store for quote collapsing");

    // segment
    std::string sg_in, sg_facts;
    auto* sg = app.add_subcommand("segment",
                                  "split a judgment into problem/commentary/fact");
    sg->add_option("--in", sg_in, "input text file")->required();
    sg->add_option("--facts", sg_facts, "fact store for quote collapsing");

    // ensemble
    std::string en_facts, en_problem, en_script;
    bool en_full_scan = false;
    auto* en = app.add_subcommand("ensemble", "run the three-model pipeline on a script");
    en->add_option("--facts", en_facts, "fact store JSONL file")->required();
    en->add_option("--problem", en_problem, "problem statement file")->required();
    en->add_option("--script", en_script, "scripted commentary file (must end <EOC>)")
        ->required();
    en->add_flag("--full-scan", en_full_scan,
                 "honour a hand-over anywhere in the commentary, not just at its end");

    // verify
    std::string vf_ref, vf_cand;
    ThresholdFlags vf_tf;
    auto* vf = app.add_subcommand("verify", "classify candidate text against a reference");
    vf->add_option("--reference", vf_ref, "reference (judgment) text file")->required();
    vf->add_option("--candidate", vf_cand, "candidate (generated) text file")->required();
    vf_tf.attach(vf);

    // eval
    std::string ev_corpus, ev_report;
    unsigned ev_jobs = 1;
    ThresholdFlags ev_tf;
    auto* ev = app.add_subcommand("eval", "score a whole fixture corpus");
    ev->add_option("--corpus", ev_corpus, "eval cases JSONL file")->required();
    ev->add_option("--report", ev_report, "write the full JSON report here");
    ev->add_option("--jobs", ev_jobs, "worker threads (order-independent)");
    ev_tf.attach(ev);

    // guard
    std::string gd_in;
    auto* gd = app.add_subcommand("guard", "decide whether a message may be copied");
    gd->add_option("--in", gd_in, "message text file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e); // prints help or the error itself
        return rc == 0 ? 0 : 1;
    }

    try {
        if (pc->parsed()) return cmd_parse_citations(pc_in);
        if (fadd->parsed()) {
            if (fa_pin_opt->count()) fa_quote.pin = fa_pin;
            return cmd_facts_add(fa_store, std::move(fa_quote));
        }
        if (flist->parsed()) return cmd_facts_list(fl_store);
        if (tk->parsed()) return cmd_tokenize(tk_in, tk_facts);
        if (sg->parsed()) return cmd_segment(sg_in, sg_facts);
        if (en->parsed()) return cmd_ensemble(en_facts, en_problem, en_script, en_full_scan);
        if (vf->parsed()) return cmd_verify(vf_ref, vf_cand, vf_tf);
        if (ev->parsed()) return cmd_eval(ev_corpus, ev_report, ev_jobs, ev_tf);
        if (gd->parsed()) return cmd_guard(gd_in);
    } catch (const std::exception& e) {
        std::cerr << "lexguard: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
