#include "qtm/cli/commands.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/core.h>
#include <fmt/ostream.h>

#include "qtm/cli/config.hpp"
#include "qtm/common.hpp"
#include "qtm/constraints/probes.hpp"
#include "qtm/corpus/index_io.hpp"
#include "qtm/corpus/tokenizer.hpp"
#include "qtm/corpus/trec.hpp"
#include "qtm/eval/metrics.hpp"
#include "qtm/eval/significance.hpp"
#include "qtm/eval/sweep.hpp"
#include "qtm/feedback/pipeline.hpp"
#include "qtm/lm/background.hpp"
#include "qtm/retrieval/run_io.hpp"

namespace qtm::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kMassKey = "background_mass";
constexpr const char* kStoplistKey = "stoplist_words";
constexpr const char* kConfigKey = "config";

const std::string& required(const std::string& value, std::string_view flag) {
    if (value.empty()) throw ConfigError(fmt::format("--{} is required", flag));
    return value;
}

std::ifstream open_input(const std::string& path, std::string_view flag) {
    required(path, flag);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw NotFoundError(fmt::format("--{}: cannot open '{}'", flag, path));
    return in;
}

std::ofstream open_output(const std::string& path, std::string_view flag) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError(fmt::format("--{}: cannot write '{}'", flag, path));
    return out;
}

// Provenance for an artifact: the resolved configuration next to it.
void write_sidecar(const std::string& artifact, const ExperimentConfig& config) {
    auto out = open_output(artifact + ".config", "out");
    fmt::print(out, "# configuration that produced {}\n{}", fs::path(artifact).filename().string(), config.to_text());
}

corpus::Stoplist load_stoplist(const ExperimentConfig& config) {
    if (config.stoplist.empty()) return corpus::Stoplist::default_list();
    if (!fs::exists(config.stoplist)) throw NotFoundError(fmt::format("--stoplist: cannot open '{}'", config.stoplist));
    return corpus::Stoplist::from_file(config.stoplist);
}

corpus::InvertedIndex open_index(const ExperimentConfig& config) {
    required(config.index, "index");
    if (!fs::exists(config.index)) throw NotFoundError(fmt::format("--index: cannot open '{}'", config.index));
    return corpus::load_index(config.index);
}

// Topics are tokenised with the stoplist the index was built with unless one is given.
corpus::Stoplist topic_stoplist(const ExperimentConfig& config, const corpus::InvertedIndex& index) {
    if (!config.stoplist.empty()) return load_stoplist(config);
    const auto it = index.metadata().find(kStoplistKey);
    if (it == index.metadata().end()) return corpus::Stoplist::default_list();
    return corpus::Stoplist::parse(std::string_view(it->second));
}

std::vector<corpus::TopicQuery> load_topics(const ExperimentConfig& config, const corpus::Stoplist& stoplist) {
    auto in = open_input(config.topics, "topics");
    return corpus::parse_trec_topics(in, corpus::Tokenizer(stoplist));
}

corpus::Judgments load_qrels(const ExperimentConfig& config) {
    auto in = open_input(config.qrels, "qrels");
    return corpus::parse_qrels(in);
}

lm::LanguageModel make_model(const ExperimentConfig& config, const corpus::InvertedIndex& index) {
    auto background = std::make_shared<lm::BackgroundModel>(lm::estimate_background(index));
    if (config.mc) {
        background->mass = *config.mc;
    } else if (const auto it = index.metadata().find(kMassKey); it != index.metadata().end()) {
        background->mass = std::stod(it->second);
    } else {
        warn("index carries no background mass; estimating it now");
        background->mass = lm::estimate_background_mass(index, *background).value;
    }
    if (config.model == lm::ModelKind::spud) return lm::LanguageModel::spud(background, {config.omega});
    return lm::LanguageModel::dirichlet(background, {config.mu});
}

// --- index -----------------------------------------------------------------------------

int cmd_index(ExperimentConfig config, std::ostream& out) {
    if (config.docs.empty()) throw ConfigError("--docs is required");
    const auto target = config.out.empty() ? required(config.index, "index") : config.out;
    const auto stoplist = load_stoplist(config);
    const corpus::Tokenizer tokenizer(stoplist);

    std::vector<corpus::Document> documents;
    for (const auto& path : config.docs) {
        auto in = open_input(path, "docs");
        auto parsed = corpus::parse_trec_documents(in, tokenizer);
        std::move(parsed.begin(), parsed.end(), std::back_inserter(documents));
    }
    auto index = corpus::build_index(std::move(documents));

    const auto background = lm::estimate_background(index);
    lm::MassEstimate mass{};
    if (config.mc) {
        mass = {*config.mc, 0, true};
    } else {
        mass = lm::estimate_background_mass(index, background);
    }
    index.set_metadata(kMassKey, fmt::format("{}", mass.value));
    config.index = target;
    index.set_metadata(kConfigKey, config.to_text());
    // Topics must be stopped like the documents, so a custom list travels with the index.
    if (!config.stoplist.empty()) {
        std::ifstream in(config.stoplist);
        std::ostringstream text;
        text << in.rdbuf();
        index.set_metadata(kStoplistKey, text.str());
    }
    corpus::persist_index(index, target);
    write_sidecar(target, config);

    const auto& s = index.stats();
    fmt::print(out, "documents\t{}\n", index.document_count());
    fmt::print(out, "non-empty\t{}\n", s.doc_count);
    fmt::print(out, "terms\t{}\n", index.lexicon().size());
    fmt::print(out, "tokens\t{}\n", s.token_total);
    fmt::print(out, "m_c\t{}\t{}\n", mass.value,
               config.mc ? "given" : fmt::format("{} iterations{}", mass.iterations, mass.converged ? "" : ", not converged"));
    fmt::print(out, "index\t{}\n", target);
    return 0;
}

// --- search ----------------------------------------------------------------------------

int cmd_search(const ExperimentConfig& config, std::ostream& out) {
    const auto index = open_index(config);
    const auto model = make_model(config, index);
    const auto stoplist = topic_stoplist(config, index);
    const auto topics = load_topics(config, stoplist);
    const auto params = config.feedback_params();
    feedback::validate(params);

    std::vector<retrieval::Ranking> rankings;
    rankings.reserve(topics.size());
    for (const auto& topic : topics) {
        try {
            rankings.push_back(feedback::run_feedback(index, model, topic, params, config.depth, &stoplist).ranking);
        } catch (const InputError& e) {
            warn(fmt::format("topic {}: {}; no results written", topic.topic_id, e.what()));
        }
    }
    auto write = [&](std::ostream& sink) {
        for (const auto& r : rankings) retrieval::write_run(sink, index, r, config.tag);
    };
    if (config.run.empty() || config.run == "-") {
        write(out);
    } else {
        auto file = open_output(config.run, "run");
        write(file);
        write_sidecar(config.run, config);
        fmt::print(out, "wrote {} topics to {}\n", rankings.size(), config.run);
    }
    return 0;
}

// --- expand ----------------------------------------------------------------------------

int cmd_expand(const ExperimentConfig& config, int topic_id, bool tsv, std::ostream& out) {
    if (config.method == feedback::Method::none) throw ConfigError("--method: expand needs a feedback method");
    const auto index = open_index(config);
    const auto model = make_model(config, index);
    const auto stoplist = topic_stoplist(config, index);
    const auto topics = load_topics(config, stoplist);
    const auto topic = std::find_if(topics.begin(), topics.end(), [&](const auto& t) { return t.topic_id == topic_id; });
    if (topic == topics.end()) throw NotFoundError(fmt::format("--topic: topic {} not found in '{}'", topic_id, config.topics));

    const auto run = feedback::run_feedback(index, model, *topic, config.feedback_params(), config.depth, &stoplist);
    if (!run.expansion) throw InputError(fmt::format("topic {}: nothing retrieved", topic_id));
    const auto tag = feedback::to_string(run.expansion->method);
    if (tsv) {
        fmt::print(out, "rank\tterm\traw\tprob\tmethod\n");
        for (std::size_t i = 0; i < run.expansion->selected.size(); ++i) {
            const auto& s = run.expansion->selected[i];
            fmt::print(out, "{}\t{}\t{:.6g}\t{:.6g}\t{}\n", i + 1, s.term, s.score, s.probability, tag);
        }
        return 0;
    }
    fmt::print(out, "topic {}  method {}  |F|={}  |T|={}\n", topic_id, tag, config.fb_docs, config.fb_terms);
    fmt::print(out, "{:>4}  {:<20} {:>12} {:>10}\n", "rank", "term", "raw", "prob");
    for (std::size_t i = 0; i < run.expansion->selected.size(); ++i) {
        const auto& s = run.expansion->selected[i];
        fmt::print(out, "{:>4}  {:<20} {:>12.4f} {:>10.4f}\n", i + 1, s.term, s.score, s.probability);
    }
    return 0;
}

// --- eval ------------------------------------------------------------------------------

int cmd_eval(const ExperimentConfig& config, const std::string& per_topic, std::ostream& out) {
    auto run_in = open_input(config.run, "run");
    const auto run = retrieval::read_run(run_in);
    const auto judgments = load_qrels(config);
    const auto records = eval::evaluate_run(run, judgments);
    const auto s = eval::summarize(records);
    fmt::print(out, "topics\t{}\nmap\t{:.4f}\nndcg@10\t{:.4f}\n", s.topics, s.map, s.ndcg10);
    if (!per_topic.empty()) {
        auto file = open_output(per_topic, "per-topic");
        eval::write_per_topic(file, records);
    }
    return 0;
}

// --- sweep -----------------------------------------------------------------------------

std::string describe(const eval::GridPoint& p) {
    return fmt::format("pi={} fb-docs={} fb-terms={} smoothing={}", p.pi, p.documents, p.terms,
                       p.smoothing ? fmt::format("{}", *p.smoothing) : std::string("auto"));
}

int cmd_sweep(const ExperimentConfig& config, const std::string& per_topic, std::ostream& out) {
    const auto index = open_index(config);
    const auto model = make_model(config, index);
    const auto stoplist = topic_stoplist(config, index);
    const auto topics = load_topics(config, stoplist);
    const auto judgments = load_qrels(config);
    const auto grid = config.sweep_grid();

    auto baseline_params = config.feedback_params();
    baseline_params.method = feedback::Method::none;
    const auto baseline = eval::run_sweep(index, model, topics, judgments, baseline_params, grid, config.depth,
                                          &stoplist, config.threads);
    const auto result = eval::run_sweep(index, model, topics, judgments, config.feedback_params(), grid, config.depth,
                                        &stoplist, config.threads);

    const auto method = std::string(feedback::to_string(config.method));
    fmt::print(out, "method {}  grid points {}  topics {}\n", method, result.grid.size(), result.topics.size());
    fmt::print(out, "even fold: {} (train MAP {:.4f})  held-out MAP {:.4f} NDCG@10 {:.4f}\n",
               describe(result.grid.at(result.cv.even.grid_index)), result.cv.even.training_map, result.cv.even.map,
               result.cv.even.ndcg10);
    fmt::print(out, "odd fold:  {} (train MAP {:.4f})  held-out MAP {:.4f} NDCG@10 {:.4f}\n",
               describe(result.grid.at(result.cv.odd.grid_index)), result.cv.odd.training_map, result.cv.odd.map,
               result.cv.odd.ndcg10);
    fmt::print(out, "held-out MAP {:.4f} NDCG@10 {:.4f}\n", result.cv.map, result.cv.ndcg10);
    fmt::print(out, "baseline MAP {:.4f} NDCG@10 {:.4f}\n", baseline.cv.map, baseline.cv.ndcg10);
    if (config.method != feedback::Method::none && result.topics.size() >= 2) {
        std::vector<double> a, b;
        for (std::size_t i = 0; i < result.cv.held_out.size(); ++i) {
            a.push_back(result.cv.held_out[i].ap);
            b.push_back(baseline.cv.held_out[i].ap);
        }
        const auto t = eval::paired_t_test(a, b);
        fmt::print(out, "paired t-test on AP vs baseline: t={:.4f} p={:.4g}{}\n", t.t, t.p,
                   t.degenerate ? " (zero variance)" : "");
    }

    const std::vector<eval::SummaryRow> rows = {
        {"none", config.collection, baseline.cv.map, baseline.cv.ndcg10},
        {method, config.collection, result.cv.map, result.cv.ndcg10},
    };
    if (config.out.empty()) {
        eval::write_summary_table(out, rows);
    } else {
        auto file = open_output(config.out, "out");
        eval::write_summary_table(file, rows);
        write_sidecar(config.out, config);
    }
    if (!per_topic.empty()) {
        auto file = open_output(per_topic, "per-topic");
        eval::write_per_topic(file, result.cv.held_out);
    }
    return 0;
}

// --- constraints -----------------------------------------------------------------------

int cmd_constraints(const ExperimentConfig& config, bool check, bool witnesses, std::ostream& out) {
    const auto start = std::chrono::steady_clock::now();
    const auto report = constraints::constraint_matrix(config.seed);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    fmt::print(out, "{}", report.format());
    fmt::print(out, "seed {}  {:.2f}s  ({} iterative fits stopped at their cap)\n", config.seed, elapsed.count(),
               report.capped_fits);
    if (witnesses) {
        for (auto m : constraints::kProbedMethods) {
            for (auto c : constraints::kConstraints) {
                const auto& v = report.at(m, c);
                if (v.adheres || !v.witness) continue;
                fmt::print(out, "{} {}: {} at step {}; scores", feedback::to_string(m), constraints::to_string(c),
                           v.witness->reason, v.witness->position);
                for (auto s : v.witness->scores) fmt::print(out, " {:.6g}", s);
                fmt::print(out, "\n");
            }
        }
    }
    const auto off = constraints::deviations(report);
    if (!off.empty()) {
        fmt::print(out, "differs from the published table at:");
        for (const auto& d : off) fmt::print(out, " {}", d);
        fmt::print(out, "\n");
        if (check) return 1;
    }
    return 0;
}

class SinkGuard {
  public:
    explicit SinkGuard(std::ostream& err)
        : previous_(set_warning_sink([&err](std::string_view msg) { err << "warning: " << msg << '\n'; })) {}
    ~SinkGuard() { set_warning_sink(previous_); }
    SinkGuard(const SinkGuard&) = delete;
    SinkGuard& operator=(const SinkGuard&) = delete;

  private:
    WarningSink previous_;
};

}  // namespace

int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    SinkGuard sink(err);
    CLI::App app("Pseudo-relevance feedback laboratory: query likelihood retrieval, query topic models and evaluation",
                 "qtmlab");
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    app.add_option("--config", config_path, "key = value file; flags given here override it");
    std::map<std::string, std::vector<std::string>> raw;
    std::map<std::string, CLI::Option*> options;
    for (const auto& key : config_keys()) {
        auto* opt = app.add_option(fmt::format("--{}", key.name), raw[std::string(key.name)], std::string(key.help));
        if (key.name == "docs") {
            opt->expected(1, -1);
        } else {
            opt->expected(1)->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        }
        options[std::string(key.name)] = opt;
    }

    auto* index_cmd = app.add_subcommand("index", "build and persist an index from TREC documents");
    auto* search_cmd = app.add_subcommand("search", "write a TREC run, optionally with feedback");
    auto* expand_cmd = app.add_subcommand("expand", "print the expansion terms of one topic");
    int topic_id = 0;
    bool tsv = false;
    expand_cmd->add_option("--topic", topic_id, "topic id")->required();
    expand_cmd->add_flag("--tsv", tsv, "tab-separated output");
    auto* eval_cmd = app.add_subcommand("eval", "score a run against qrels");
    std::string per_topic;
    eval_cmd->add_option("--per-topic", per_topic, "write per-topic metrics as TSV");
    auto* sweep_cmd = app.add_subcommand("sweep", "grid search with two-fold even/odd cross-validation");
    sweep_cmd->add_option("--per-topic", per_topic, "write held-out per-topic metrics as TSV");
    auto* constraints_cmd = app.add_subcommand("constraints", "verify the feedback methods against the PRF constraints");
    bool check = false;
    bool witnesses = false;
    constraints_cmd->add_flag("--check", check, "exit with status 1 if the matrix differs from the published one");
    constraints_cmd->add_flag("--witnesses", witnesses, "print the counterexample behind every 'no'");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "qtmlab: error: " << e.what() << '\n';
        return 2;
    }

    try {
        ExperimentConfig config = config_path.empty() ? ExperimentConfig{} : ExperimentConfig::from_file(config_path);
        for (const auto& [key, opt] : options) {
            if (opt->count() == 0) continue;
            const auto& values = raw[key];
            std::string joined;
            for (std::size_t i = 0; i < values.size(); ++i) joined += (i ? "," : "") + values[i];
            config.set(key, joined);
        }
        config.validate();

        if (index_cmd->parsed()) return cmd_index(config, out);
        if (search_cmd->parsed()) return cmd_search(config, out);
        if (expand_cmd->parsed()) return cmd_expand(config, topic_id, tsv, out);
        if (eval_cmd->parsed()) return cmd_eval(config, per_topic, out);
        if (sweep_cmd->parsed()) return cmd_sweep(config, per_topic, out);
        if (constraints_cmd->parsed()) return cmd_constraints(config, check, witnesses, out);
    } catch (const std::exception& e) {
        err << "qtmlab: error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

}  // namespace qtm::cli
