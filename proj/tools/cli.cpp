#include "cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>

#include "anchoralign/bead_io.hpp"
#include "anchoralign/config.hpp"
#include "anchoralign/error.hpp"
#include "anchoralign/pipeline.hpp"
#include "anchoralign/scoring.hpp"

namespace anchoralign::cli {

namespace {

struct AlignArgs {
    std::string src_text;
    std::string tgt_text;
    std::string src_emb;
    std::string tgt_emb;
    std::string emb_format = "auto";
    std::string out;
    std::string dump_anchors;
    std::string dump_intervals;
    std::string config_file;
    bool timings = false;
    bool print_config = false;
    std::map<std::string, std::string> values;
    std::map<std::string, bool> flags;
    std::map<std::string, CLI::Option*> options;
};

struct ScoreArgs {
    std::string pred;
    std::string gold;
    std::string format = "tsv";
    bool exclude_null = false;
};

MatrixFormat matrix_format_for(const std::string& path, const std::string& declared) {
    if (declared != "auto") {
        return parse_matrix_format(declared);
    }
    const bool tsv = path.size() >= 4 && path.compare(path.size() - 4, 4, ".tsv") == 0;
    return tsv ? MatrixFormat::Tsv : MatrixFormat::Binary;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw Error(ErrorCode::Io, "cannot write " + path);
    }
    return f;
}

void write_anchor_dump(const std::string& path, const std::vector<AnchorPoint>& anchors) {
    auto f = open_output(path);
    f << "x\ty\tsim\tdensity_ratio\n";
    char buf[96];
    for (const auto& a : anchors) {
        std::snprintf(buf, sizeof buf, "%zu\t%zu\t%.6f\t%.6f\n", a.x, a.y, a.sim, a.density_ratio);
        f << buf;
    }
}

void write_interval_dump(const std::string& path, const std::vector<AlignedInterval>& intervals) {
    auto f = open_output(path);
    f << "x_start\tx_end\ty_start\ty_end\tn_anchors\thorizontal_density\n";
    char buf[160];
    for (const auto& ai : intervals) {
        const auto& iv = ai.interval;
        // inclusive ends; an empty side is reported as end = start - 1
        std::snprintf(buf, sizeof buf, "%zu\t%lld\t%zu\t%lld\t%zu\t%.6f\n", iv.src.begin,
                      static_cast<long long>(iv.src.end) - 1, iv.tgt.begin,
                      static_cast<long long>(iv.tgt.end) - 1, iv.anchors.size(),
                      iv.horizontal_density());
        f << buf;
    }
}

AlignConfig resolve_config(const AlignArgs& a) {
    AlignConfig config;
    if (!a.config_file.empty()) {
        apply_config_file(config, a.config_file);
    }
    for (const auto& field : config_fields()) {
        const CLI::Option* opt = a.options.at(field.name);
        if (opt->count() == 0) {
            continue;
        }
        if (field.is_flag) {
            field.set(config, a.flags.at(field.name) ? "true" : "false");
        } else {
            field.set(config, a.values.at(field.name));
        }
    }
    if (config.intervals.adaptive) {
        config.intervals.detect = true;
    }
    config.validate();
    return config;
}

int run_align(const AlignArgs& a, std::ostream& out, std::ostream& err) {
    const AlignConfig config = resolve_config(a);
    if (a.print_config) {
        out << print_config(config);
        return 0;
    }
    std::string missing;
    for (const auto& [flag, value] : {std::pair{"--src-text", &a.src_text}, {"--tgt-text", &a.tgt_text},
                                      {"--src-emb", &a.src_emb}, {"--tgt-emb", &a.tgt_emb}}) {
        if (value->empty()) {
            missing += std::string(missing.empty() ? "" : ", ") + flag;
        }
    }
    if (!missing.empty()) {
        err << "align: missing required option(s): " << missing << "\n"
            << "usage: anchoralign align --src-text FILE --tgt-text FILE --src-emb FILE --tgt-emb FILE "
               "[options]\n";
        return 2;
    }

    const auto t0 = std::chrono::steady_clock::now();
    const SentenceDoc src_doc = load_sentences(a.src_text);
    const SentenceDoc tgt_doc = load_sentences(a.tgt_text);
    const EmbeddingMatrix src_emb = load_matrix(a.src_emb, matrix_format_for(a.src_emb, a.emb_format));
    const EmbeddingMatrix tgt_emb = load_matrix(a.tgt_emb, matrix_format_for(a.tgt_emb, a.emb_format));
    const double load_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

    DocumentAlignment result = align_documents(src_doc, tgt_doc, src_emb, tgt_emb, config);
    result.timings.load_ms += load_ms;

    BeadWriteOptions options;
    options.format = config.format;
    options.text_delimiter = config.text_delimiter;
    std::optional<std::ofstream> file;
    if (!a.out.empty()) {
        file.emplace(open_output(a.out));
    }
    std::ostream& sink = file ? static_cast<std::ostream&>(*file) : out;
    for (const auto& bead : result.beads()) {
        write_bead(sink, bead, options, &src_doc, &tgt_doc);
    }
    if (!a.dump_anchors.empty()) {
        write_anchor_dump(a.dump_anchors, result.anchors);
    }
    if (!a.dump_intervals.empty()) {
        write_interval_dump(a.dump_intervals, result.intervals);
    }
    if (a.timings) {
        const auto& t = result.timings;
        char buf[256];
        std::snprintf(buf, sizeof buf,
                      "load_ms\t%.3f\nsimilarity_ms\t%.3f\nkbest_ms\t%.3f\nanchoring_ms\t%.3f\n"
                      "intervals_ms\t%.3f\ndp_ms\t%.3f\n",
                      t.load_ms, t.similarity_ms, t.kbest_ms, t.anchoring_ms, t.intervals_ms, t.dp_ms);
        err << buf;
        std::snprintf(buf, sizeof buf, "avg_score\t%.6f\n", result.avg_score);
        err << buf;
    }
    return 0;
}

int run_score(const ScoreArgs& a, std::ostream& out) {
    const BeadFormat format = parse_bead_format(a.format);
    const auto pred = load_beads(a.pred, format);
    const GoldAlignment gold = load_gold(a.gold, format);
    out << format_prf(strict_prf(pred, gold, !a.exclude_null)) << "\n";
    return 0;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Anchor-guided bitext sentence aligner", "anchoralign"};
    app.require_subcommand(1);

    AlignArgs align_args;
    CLI::App* align = app.add_subcommand("align", "align two sentence-split documents");
    align->add_option("--src-text", align_args.src_text, "source sentences, one per line");
    align->add_option("--tgt-text", align_args.tgt_text, "target sentences, one per line");
    align->add_option("--src-emb", align_args.src_emb, "source embeddings (.aemb or .tsv)");
    align->add_option("--tgt-emb", align_args.tgt_emb, "target embeddings (.aemb or .tsv)");
    align->add_option("--emb-format", align_args.emb_format, "binary, tsv or auto (by extension)")
        ->check(CLI::IsMember({"auto", "binary", "tsv"}));
    align->add_option("--out", align_args.out, "alignment output (default: stdout)");
    align->add_option("--dump-anchors", align_args.dump_anchors, "write the anchor set as TSV");
    align->add_option("--dump-intervals", align_args.dump_intervals, "write the intervals as TSV");
    align->add_option("--config", align_args.config_file, "key=value config file");
    align->add_flag("--timings", align_args.timings, "print per-stage wall-clock times to stderr");
    align->add_flag("--print-config", align_args.print_config, "print the resolved config and exit");
    for (const auto& field : config_fields()) {
        CLI::Option* opt = nullptr;
        if (field.is_flag) {
            opt = align->add_flag("--" + field.name, align_args.flags[field.name], field.help);
        } else {
            opt = align->add_option("--" + field.name, align_args.values[field.name], field.help);
        }
        align_args.options[field.name] = opt;
    }

    ScoreArgs score_args;
    CLI::App* score = app.add_subcommand("score", "strict precision/recall/F1 against a gold alignment");
    score->add_option("--pred", score_args.pred, "predicted alignment")->required();
    score->add_option("--gold", score_args.gold, "gold alignment")->required();
    score->add_option("--format", score_args.format, "tsv or bertalign")
        ->check(CLI::IsMember({"tsv", "bertalign"}));
    score->add_flag("--exclude-null", score_args.exclude_null, "ignore 1-0 and 0-1 beads");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << (align->parsed() ? align->help() : score->parsed() ? score->help() : app.help());
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n" << app.help();
        return 2;
    }

    try {
        if (align->parsed()) {
            return run_align(align_args, out, err);
        }
        return run_score(score_args, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return e.code() == ErrorCode::Config ? 2 : 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace anchoralign::cli
