#include "qtm/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include <fmt/core.h>

#include "qtm/common.hpp"

namespace qtm::cli {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
    std::vector<std::string_view> out;
    s = trim(s);
    if (s.empty()) return out;
    std::size_t start = 0;
    while (true) {
        const auto comma = s.find(',', start);
        out.push_back(trim(s.substr(start, comma == std::string_view::npos ? comma : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view expected) {
    throw ConfigError(fmt::format("--{}: invalid value '{}' (expected {})", key, value, expected));
}

double parse_double(std::string_view key, std::string_view value) {
    value = trim(value);
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size() || value.empty()) bad_value(key, value, "a number");
    return out;
}

std::uint64_t parse_unsigned(std::string_view key, std::string_view value) {
    value = trim(value);
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size() || value.empty()) {
        bad_value(key, value, "a non-negative integer");
    }
    return out;
}

std::optional<double> parse_optional(std::string_view key, std::string_view value) {
    if (trim(value) == "auto") return std::nullopt;
    return parse_double(key, value);
}

std::string show(double v) { return fmt::format("{}", v); }
std::string show(const std::optional<double>& v) { return v ? show(*v) : "auto"; }

template <typename T, typename Fn>
std::string join(const std::vector<T>& values, Fn&& fn) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += fn(values[i]);
    }
    return out;
}

struct Field {
    ConfigKey key;
    std::function<void(ExperimentConfig&, std::string_view)> set;
    std::function<std::string(const ExperimentConfig&)> get;
};

#define QTM_STRING_FIELD(name, member, help)                                                       \
    Field {                                                                                        \
        {name, help}, [](ExperimentConfig& c, std::string_view v) { c.member = std::string(trim(v)); }, \
            [](const ExperimentConfig& c) { return c.member; }                                      \
    }

const std::vector<Field>& fields() {
    static const std::vector<Field> table = {
        {{"docs", "TREC document files (comma-separated)"},
         [](ExperimentConfig& c, std::string_view v) {
             c.docs.clear();
             for (auto p : split_list(v)) c.docs.emplace_back(p);
         },
         [](const ExperimentConfig& c) { return join(c.docs, [](const std::string& s) { return s; }); }},
        QTM_STRING_FIELD("index", index, "index file"),
        QTM_STRING_FIELD("topics", topics, "TREC topics file"),
        QTM_STRING_FIELD("qrels", qrels, "relevance judgments"),
        QTM_STRING_FIELD("stoplist", stoplist, "stopword file (default: built-in list)"),
        {{"model", "document model: spud or dirichlet"},
         [](ExperimentConfig& c, std::string_view v) {
             v = trim(v);
             if (v == "spud") {
                 c.model = lm::ModelKind::spud;
             } else if (v == "dirichlet") {
                 c.model = lm::ModelKind::dirichlet;
             } else {
                 bad_value("model", v, "spud or dirichlet");
             }
         },
         [](const ExperimentConfig& c) { return std::string(c.model == lm::ModelKind::spud ? "spud" : "dirichlet"); }},
        {{"omega", "SPUD background weight"},
         [](ExperimentConfig& c, std::string_view v) { c.omega = parse_double("omega", v); },
         [](const ExperimentConfig& c) { return show(c.omega); }},
        {{"mu", "Dirichlet prior mass"},
         [](ExperimentConfig& c, std::string_view v) { c.mu = parse_double("mu", v); },
         [](const ExperimentConfig& c) { return show(c.mu); }},
        {{"mc", "background mass m_c (auto: value stored in the index)"},
         [](ExperimentConfig& c, std::string_view v) { c.mc = parse_optional("mc", v); },
         [](const ExperimentConfig& c) { return show(c.mc); }},
        {{"method", "feedback method: none, rm3, smm, pdcm, qtm_dir, qtm_spud"},
         [](ExperimentConfig& c, std::string_view v) {
             try {
                 c.method = feedback::parse_method(trim(v));
             } catch (const ConfigError&) {
                 bad_value("method", v, "none, rm3, smm, pdcm, qtm_dir or qtm_spud");
             }
         },
         [](const ExperimentConfig& c) { return std::string(feedback::to_string(c.method)); }},
        {{"pi", "weight of the expansion model"},
         [](ExperimentConfig& c, std::string_view v) { c.pi = parse_double("pi", v); },
         [](const ExperimentConfig& c) { return show(c.pi); }},
        {{"fb-docs", "feedback documents |F|"},
         [](ExperimentConfig& c, std::string_view v) { c.fb_docs = parse_unsigned("fb-docs", v); },
         [](const ExperimentConfig& c) { return std::to_string(c.fb_docs); }},
        {{"fb-terms", "expansion terms |T|"},
         [](ExperimentConfig& c, std::string_view v) { c.fb_terms = parse_unsigned("fb-terms", v); },
         [](const ExperimentConfig& c) { return std::to_string(c.fb_terms); }},
        {{"smm-lambda", "collection weight of the simple mixture model"},
         [](ExperimentConfig& c, std::string_view v) { c.smm_lambda = parse_double("smm-lambda", v); },
         [](const ExperimentConfig& c) { return show(c.smm_lambda); }},
        {{"fb-omega", "SPUD smoothing of the feedback representation (auto: method default)"},
         [](ExperimentConfig& c, std::string_view v) { c.fb_omega = parse_optional("fb-omega", v); },
         [](const ExperimentConfig& c) { return show(c.fb_omega); }},
        {{"fb-mu", "Dirichlet smoothing of the feedback representation (auto: method default)"},
         [](ExperimentConfig& c, std::string_view v) { c.fb_mu = parse_optional("fb-mu", v); },
         [](const ExperimentConfig& c) { return show(c.fb_mu); }},
        {{"topical-threshold", "drop QTM candidates scoring at or below this (auto: off)"},
         [](ExperimentConfig& c, std::string_view v) { c.topical_threshold = parse_optional("topical-threshold", v); },
         [](const ExperimentConfig& c) { return show(c.topical_threshold); }},
        {{"depth", "documents retrieved per topic"},
         [](ExperimentConfig& c, std::string_view v) { c.depth = parse_unsigned("depth", v); },
         [](const ExperimentConfig& c) { return std::to_string(c.depth); }},
        {{"grid-pi", "sweep values of pi (comma-separated)"},
         [](ExperimentConfig& c, std::string_view v) {
             c.grid_pi.clear();
             for (auto x : split_list(v)) c.grid_pi.push_back(parse_double("grid-pi", x));
         },
         [](const ExperimentConfig& c) { return join(c.grid_pi, [](double x) { return show(x); }); }},
        {{"grid-docs", "sweep values of |F|"},
         [](ExperimentConfig& c, std::string_view v) {
             c.grid_docs.clear();
             for (auto x : split_list(v)) c.grid_docs.push_back(parse_unsigned("grid-docs", x));
         },
         [](const ExperimentConfig& c) { return join(c.grid_docs, [](std::size_t x) { return std::to_string(x); }); }},
        {{"grid-terms", "sweep values of |T|"},
         [](ExperimentConfig& c, std::string_view v) {
             c.grid_terms.clear();
             for (auto x : split_list(v)) c.grid_terms.push_back(parse_unsigned("grid-terms", x));
         },
         [](const ExperimentConfig& c) { return join(c.grid_terms, [](std::size_t x) { return std::to_string(x); }); }},
        {{"grid-smoothing", "sweep values of the feedback smoothing (omega or mu; auto allowed)"},
         [](ExperimentConfig& c, std::string_view v) {
             c.grid_smoothing.clear();
             for (auto x : split_list(v)) c.grid_smoothing.push_back(parse_optional("grid-smoothing", x));
         },
         [](const ExperimentConfig& c) {
             return join(c.grid_smoothing, [](const std::optional<double>& x) { return show(x); });
         }},
        QTM_STRING_FIELD("run", run, "run file (written by search, read by eval)"),
        QTM_STRING_FIELD("out", out, "output file (index: index path; sweep/eval: table)"),
        QTM_STRING_FIELD("tag", tag, "run tag"),
        QTM_STRING_FIELD("collection", collection, "collection label in summary tables"),
        {{"seed", "random seed"},
         [](ExperimentConfig& c, std::string_view v) { c.seed = parse_unsigned("seed", v); },
         [](const ExperimentConfig& c) { return std::to_string(c.seed); }},
        {{"threads", "worker threads (0: hardware concurrency)"},
         [](ExperimentConfig& c, std::string_view v) {
             c.threads = static_cast<unsigned>(parse_unsigned("threads", v));
         },
         [](const ExperimentConfig& c) { return std::to_string(c.threads); }},
    };
    return table;
}

#undef QTM_STRING_FIELD

}  // namespace

const std::vector<ConfigKey>& config_keys() {
    static const std::vector<ConfigKey> keys = [] {
        std::vector<ConfigKey> out;
        for (const auto& f : fields()) out.push_back(f.key);
        return out;
    }();
    return keys;
}

void ExperimentConfig::set(std::string_view key, std::string_view value) {
    for (const auto& f : fields()) {
        if (f.key.name == key) {
            f.set(*this, value);
            return;
        }
    }
    throw ConfigError(fmt::format("unknown configuration key '{}'", key));
}

std::string ExperimentConfig::to_text() const {
    std::string out;
    for (const auto& f : fields()) out += fmt::format("{} = {}\n", f.key.name, f.get(*this));
    return out;
}

ExperimentConfig ExperimentConfig::from_text(std::string_view text) {
    ExperimentConfig config;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = text.find('\n', start);
        auto line = trim(text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
        ++line_no;
        start = end == std::string_view::npos ? text.size() + 1 : end + 1;
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(fmt::format("config line {}: expected 'key = value'", line_no));
        }
        config.set(trim(line.substr(0, eq)), line.substr(eq + 1));
    }
    return config;
}

ExperimentConfig ExperimentConfig::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw NotFoundError(fmt::format("--config: cannot open '{}'", path.string()));
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return from_text(buffer.str());
}

void ExperimentConfig::validate() const {
    auto require = [](bool ok, std::string_view key, std::string_view what) {
        if (!ok) throw ConfigError(fmt::format("--{}: {}", key, what));
    };
    require(omega >= 0.0 && omega <= 1.0, "omega", "must lie in [0, 1]");
    require(mu >= 0.0 && std::isfinite(mu), "mu", "must be >= 0");
    require(!mc || (*mc > 0.0 && std::isfinite(*mc)), "mc", "must be > 0");
    require(pi >= 0.0 && pi <= 1.0, "pi", "must lie in [0, 1]");
    require(fb_docs >= 1, "fb-docs", "must be at least 1");
    require(fb_terms >= 1, "fb-terms", "must be at least 1");
    require(smm_lambda >= 0.0 && smm_lambda < 1.0, "smm-lambda", "must lie in [0, 1)");
    require(!fb_omega || (*fb_omega >= 0.0 && *fb_omega <= 1.0), "fb-omega", "must lie in [0, 1]");
    require(!fb_mu || (*fb_mu >= 0.0 && std::isfinite(*fb_mu)), "fb-mu", "must be >= 0");
    require(depth >= 1, "depth", "must be at least 1");
    for (auto v : grid_pi) require(v >= 0.0 && v <= 1.0, "grid-pi", "values must lie in [0, 1]");
    for (auto v : grid_docs) require(v >= 1, "grid-docs", "values must be at least 1");
    for (auto v : grid_terms) require(v >= 1, "grid-terms", "values must be at least 1");
    for (const auto& v : grid_smoothing) require(!v || *v >= 0.0, "grid-smoothing", "values must be >= 0");
}

feedback::FeedbackParams ExperimentConfig::feedback_params() const {
    feedback::FeedbackParams p;
    p.method = method;
    p.documents = fb_docs;
    p.terms = fb_terms;
    p.pi = pi;
    p.smm_lambda = smm_lambda;
    p.omega = fb_omega;
    p.mu = fb_mu;
    p.topical_threshold = topical_threshold;
    return p;
}

eval::SweepGrid ExperimentConfig::sweep_grid() const {
    auto grid = eval::SweepGrid::defaults();
    if (!grid_pi.empty()) grid.pi = grid_pi;
    if (!grid_docs.empty()) grid.documents = grid_docs;
    if (!grid_terms.empty()) grid.terms = grid_terms;
    if (!grid_smoothing.empty()) grid.smoothing = grid_smoothing;
    return grid;
}

}  // namespace qtm::cli
