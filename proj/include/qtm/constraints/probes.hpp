#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qtm/feedback/expansion.hpp"

namespace qtm::constraints {

enum class Constraint { ds, tf, concavity, idf, dl, df };

inline constexpr std::array<Constraint, 6> kConstraints{Constraint::ds,  Constraint::tf, Constraint::concavity,
                                                        Constraint::idf, Constraint::dl, Constraint::df};
inline constexpr std::array<feedback::Method, 5> kProbedMethods{feedback::Method::pdcm, feedback::Method::smm,
                                                                feedback::Method::rm3, feedback::Method::qtm_dir,
                                                                feedback::Method::qtm_spud};

std::string_view to_string(Constraint c);

enum class Direction { increasing, decreasing, concave };
Direction direction(Constraint c);

struct TermStats {
    double df = 0.0;
    double ctf = 0.0;

    friend bool operator==(const TermStats&, const TermStats&) = default;
};

/// A synthetic feedback scenario. Only the listed terms are modelled explicitly; the rest
/// of the collection is summarised by `other_df` and `other_ctf`.
struct ProbeConfig {
    std::vector<std::map<std::string, std::uint32_t>> documents;
    std::vector<double> log_scores;
    std::map<std::string, TermStats> collection;
    double other_df = 0.0;
    double other_ctf = 0.0;
    double mass = 0.0;  // m_c
    double omega = 0.8;
    double mu = 1000.0;
    double smm_lambda = 0.2;
    std::string term = "t";  // the probed term

    friend bool operator==(const ProbeConfig&, const ProbeConfig&) = default;
};

/// Raw selection score of `config.term` under `method`, computed by the method's own build_*
/// function on the scenario's feedback set. Throws InputError for inconsistent scenarios.
double probe_score(feedback::Method method, const ProbeConfig& config);

/// Sequences of scenarios, each varying only the constraint's controlled variable.
using ProbeFamily = std::vector<std::vector<ProbeConfig>>;

inline constexpr std::size_t kMinConfigurations = 100;

/// At least `bases` sequences, more if needed to reach kMinConfigurations configurations.
/// Deterministic given the seed.
ProbeFamily probe_family(Constraint c, std::uint64_t seed, std::size_t bases = 20);

struct Witness {
    std::vector<ProbeConfig> sequence;
    std::vector<double> scores;
    std::size_t position = 0;  // first step of the violation (or of the flat run)
    bool violation = false;    // false: the score never moves in the required direction
    std::string reason;
};

struct Verdict {
    bool adheres = false;
    std::size_t configurations = 0;
    std::optional<Witness> witness;  // always present when !adheres
};

/// "yes" iff no sequence moves against the direction (beyond a relative tolerance of 1e-6)
/// and at least one moves strictly with it. Throws InputError for a family in which no
/// sequence varies.
Verdict probe_constraint(feedback::Method method, Constraint c, const ProbeFamily& family);

/// Re-scores a witness and reports whether it still demonstrates the failure.
bool replay(feedback::Method method, Constraint c, const Witness& witness);

struct ConstraintReport {
    std::array<std::array<Verdict, kConstraints.size()>, kProbedMethods.size()> cells;
    std::size_t capped_fits = 0;  // SMM/PDCM fits that stopped at their iteration cap

    const Verdict& at(feedback::Method m, Constraint c) const;
    /// Rows in the layout of the published adherence table.
    std::string format() const;
};

ConstraintReport constraint_matrix(std::uint64_t seed = 1, std::size_t bases = 20);

/// Published adherence (true = "yes").
bool expected_adherence(feedback::Method m, Constraint c);
/// Cells whose verdict differs from the published table, as "method/constraint".
std::vector<std::string> deviations(const ConstraintReport& report);

}  // namespace qtm::constraints
