#include <doctest.h>

#include "qtm/feedback/expansion.hpp"
#include "qtm/feedback/methods.hpp"
#include "qtm/retrieval/search.hpp"
#include "support/helpers.hpp"
#include "support/minicorpus.hpp"

using namespace qtm;
using doctest::Approx;
using testing::MiniCorpus;
using testing::oracle_value;

namespace {

const corpus::TopicQuery& topic(int id) {
    for (const auto& t : MiniCorpus::get().topics) {
        if (t.topic_id == id) return t;
    }
    throw InputError("no topic");
}

// Retrieval always runs at the oracle's mass so that score comparisons are exact.
double oracle_mass() { return oracle_value(MiniCorpus::get().oracle, "mc"); }

feedback::FeedbackParams params(feedback::Method m) {
    feedback::FeedbackParams p;
    p.method = m;
    return p;
}

}  // namespace

TEST_SUITE("minicorpus") {

TEST_CASE("collection statistics") {
    const auto& mini = MiniCorpus::get();
    const auto& stats = mini.index.stats();
    CHECK(mini.index.document_count() == std::size_t(oracle_value(mini.oracle, "documents")));
    CHECK(mini.index.lexicon().size() == std::size_t(oracle_value(mini.oracle, "terms")));
    CHECK(stats.token_total == std::uint64_t(oracle_value(mini.oracle, "tokens")));
    CHECK(stats.df_total == std::uint64_t(oracle_value(mini.oracle, "df_total")));
    for (const char* t : {"air", "traffic", "control", "peopl", "runwai"}) {
        const auto id = *mini.index.lexicon().find(t);
        CHECK(stats.df[id] == oracle_value(mini.oracle, "df", t));
        CHECK(stats.ctf[id] == oracle_value(mini.oracle, "ctf", t));
    }
    CHECK(mini.topics.size() == 12);
}

TEST_CASE("background mass") {
    const auto& mini = MiniCorpus::get();
    const auto bg = lm::estimate_background(mini.index);
    const auto est = lm::estimate_background_mass(mini.index, bg);
    CHECK(est.converged);
    CHECK(est.value == Approx(oracle_mass()).epsilon(1e-5));
    CHECK(lm::background_log_likelihood(mini.index, bg, oracle_mass()) ==
          Approx(oracle_value(mini.oracle, "mc_loglik")).epsilon(1e-10));
}

TEST_CASE("first pass for topic 301") {
    const auto& mini = MiniCorpus::get();
    const auto model = mini.spud(oracle_mass());
    const auto ranking =
        retrieval::search(mini.index, model, lm::resolve_query(mini.index.lexicon(), topic(301)), 10);
    auto [it, end] = mini.oracle.equal_range("first_pass");
    for (std::size_t i = 0; it != end; ++it, ++i) {
        REQUIRE(i < ranking.entries.size());
        CHECK(mini.index.document(ranking.entries[i].doc).doc_id == it->second.at(2));
        CHECK(ranking.entries[i].score == Approx(std::stod(it->second.at(3))).epsilon(1e-10));
    }
}

TEST_CASE("expansion terms for topic 301") {
    const auto& mini = MiniCorpus::get();
    const auto model = mini.spud(oracle_mass());
    const auto first =
        retrieval::search(mini.index, model, lm::resolve_query(mini.index.lexicon(), topic(301)), 1000);
    const auto fs = retrieval::make_feedback_set(mini.index, first, 10);
    const feedback::FeedbackContext ctx{&mini.index.lexicon(), &model.background(), nullptr};
    for (auto m : {feedback::Method::qtm_spud, feedback::Method::rm3}) {
        auto p = params(m);
        p.terms = 10;
        const auto model_terms = feedback::expand(fs, ctx, model, p).selected;
        auto [it, end] = mini.oracle.equal_range(std::string(feedback::to_string(m)));
        std::size_t i = 0;
        for (; it != end; ++it, ++i) {
            REQUIRE(i < model_terms.size());
            CHECK(model_terms[i].term == it->second.at(2));
            CHECK(model_terms[i].score == Approx(std::stod(it->second.at(3))).epsilon(1e-10));
            CHECK(model_terms[i].probability == Approx(std::stod(it->second.at(4))).epsilon(1e-10));
        }
        CHECK(i == 10);
    }
}

TEST_CASE("effectiveness matches the oracle") {
    const auto& mini = MiniCorpus::get();
    const auto model = mini.spud(oracle_mass());
    for (auto m : {feedback::Method::none, feedback::Method::qtm_spud, feedback::Method::rm3}) {
        const auto s = mini.evaluate(model, params(m));
        const std::string name(feedback::to_string(m));
        CHECK_MESSAGE(s.map == Approx(oracle_value(mini.oracle, "map", name)).epsilon(1e-9), name);
        CHECK_MESSAGE(s.ndcg10 == Approx(oracle_value(mini.oracle, "ndcg10", name)).epsilon(1e-9), name);
    }
}

TEST_CASE("feedback smoothing should match the retrieval model for qtm but not for rm3") {
    const auto& mini = MiniCorpus::get();
    const auto model = mini.spud(oracle_mass());
    auto qtm = params(feedback::Method::qtm_spud);
    qtm.omega = 0.8;
    const double qtm_matched = mini.evaluate(model, qtm).map;
    qtm.omega = 0.0;
    const double qtm_unsmoothed = mini.evaluate(model, qtm).map;
    CHECK(qtm_matched >= qtm_unsmoothed);

    auto rm3 = params(feedback::Method::rm3);
    const double rm3_ml = mini.evaluate(model, rm3).map;
    rm3.omega = 0.8;
    const double rm3_smoothed = mini.evaluate(model, rm3).map;
    CHECK(rm3_ml >= rm3_smoothed);
}

TEST_CASE("every method improves on the first pass") {
    const auto& mini = MiniCorpus::get();
    const auto model = mini.spud(oracle_mass());
    const double base = mini.evaluate(model, params(feedback::Method::none)).map;
    testing::CapturedWarnings quiet;
    for (auto m : {feedback::Method::rm3, feedback::Method::smm, feedback::Method::pdcm, feedback::Method::qtm_dir,
                   feedback::Method::qtm_spud}) {
        CHECK_MESSAGE(mini.evaluate(model, params(m)).map > base, feedback::to_string(m));
    }
}

}  // TEST_SUITE
