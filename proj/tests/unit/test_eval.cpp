#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "qtm/common.hpp"
#include "qtm/eval/cross_validation.hpp"
#include "qtm/eval/metrics.hpp"
#include "qtm/eval/significance.hpp"
#include "qtm/eval/sweep.hpp"
#include "support/helpers.hpp"
#include "support/oracles.hpp"

using namespace qtm;
using namespace qtm::eval;
using doctest::Approx;
using Ids = std::vector<std::string>;

namespace {

corpus::Judgments judge(int topic, const std::map<std::string, int>& grades) {
    corpus::Judgments j;
    for (const auto& [d, g] : grades) j.set(topic, d, g);
    return j;
}

}  // namespace

TEST_SUITE("eval") {

TEST_CASE("average precision") {
    const auto j = judge(1, {{"r1", 1}, {"r2", 1}, {"n", 0}});
    CHECK(*average_precision(Ids{"r1", "n", "r2"}, j, 1) == Approx(0.83333).epsilon(1e-5));
    CHECK(*average_precision(Ids{"r1", "r2", "n"}, j, 1) == 1.0);
    CHECK(*average_precision(Ids{"n", "u1", "u2"}, j, 1) == 0.0);
    CHECK(*average_precision(Ids{"r1"}, j, 1) == Approx(0.5));
    CHECK(*average_precision(Ids{"n", "u", "r1", "r2"}, j, 1, 2) == 0.0);
    CHECK(*average_precision(Ids{"r1", "r1", "r2"}, j, 1) == 1.0);
    CHECK_FALSE(average_precision(Ids{"r1"}, j, 2));
}

TEST_CASE("ndcg at ten") {
    const auto j = judge(1, {{"r", 1}});
    CHECK(*ndcg_at_k(Ids{"r"}, j, 1) == 1.0);
    CHECK(*ndcg_at_k(Ids{"n", "r"}, j, 1) == Approx(0.63093).epsilon(1e-5));
    Ids eleven(10, "");
    for (int i = 0; i < 10; ++i) eleven[std::size_t(i)] = "n" + std::to_string(i);
    eleven.push_back("r");
    CHECK(*ndcg_at_k(eleven, j, 1) == 0.0);

    const auto graded = judge(1, {{"a", 1}, {"b", 2}});
    const double expected = (1 + 2 / std::log2(3.0)) / (2 + 1 / std::log2(3.0));
    CHECK(*ndcg_at_k(Ids{"a", "b"}, graded, 1) == Approx(expected).epsilon(1e-12));
    CHECK_FALSE(ndcg_at_k(Ids{"a"}, graded, 5));
}

TEST_CASE("metrics ignore reordering below the last relevant document and drop when relevance moves down") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        Ids ranking;
        std::map<std::string, int> grades;
        for (int i = 0; i < 30; ++i) {
            ranking.push_back("d" + std::to_string(i));
            if (rng() % 4 == 0) grades[ranking.back()] = 1 + int(rng() % 2);
        }
        grades["d0"] = grades.count("d0") ? grades["d0"] : 1;
        const auto j = judge(1, grades);
        std::size_t last = 0;
        for (std::size_t i = 0; i < ranking.size(); ++i) {
            if (grades.count(ranking[i])) last = i;
        }
        auto tail = ranking;
        std::shuffle(tail.begin() + std::ptrdiff_t(last) + 1, tail.end(), rng);
        CHECK(*average_precision(tail, j, 1) == *average_precision(ranking, j, 1));
        auto beyond = ranking;
        if (beyond.size() > 10) std::shuffle(beyond.begin() + 10, beyond.end(), rng);
        CHECK(*ndcg_at_k(beyond, j, 1) == *ndcg_at_k(ranking, j, 1));

        for (std::size_t i = 0; i + 1 < ranking.size(); ++i) {
            if (grades.count(ranking[i]) && !grades.count(ranking[i + 1])) {
                auto swapped = ranking;
                std::swap(swapped[i], swapped[i + 1]);
                CHECK(*average_precision(swapped, j, 1) < *average_precision(ranking, j, 1));
                CHECK(*ndcg_at_k(swapped, j, 1, 30) < *ndcg_at_k(ranking, j, 1, 30));
                break;
            }
        }
    }
}

TEST_CASE("paired t-test") {
    const std::vector<double> zero(5, 0.0), diffs{1, -1, 2, 0, 1};
    const auto r = paired_t_test(diffs, zero);
    CHECK(r.t == Approx(1.1767).epsilon(1e-4));
    CHECK(r.p == Approx(0.3046).epsilon(1e-3));
    CHECK(r.df == 4);

    const std::vector<double> a{.3, .5, .2, .9, .4, .6}, b{.25, .55, .1, .7, .45, .3};
    CHECK(paired_t_test(a, b).p == Approx(0.16801232039824182).epsilon(1e-9));
    CHECK(paired_t_test(a, b).p == paired_t_test(b, a).p);
    CHECK(paired_t_test(a, a).p == 1.0);

    const std::vector<double> up{1.1, 1.1, 1.1, 1.1}, base{1, 1, 1, 1};
    const auto degenerate = paired_t_test(up, base);
    CHECK(degenerate.degenerate);
    CHECK(std::isinf(degenerate.t));
    CHECK(degenerate.p == std::numeric_limits<double>::min());

    CHECK_THROWS_AS(paired_t_test(std::vector<double>{1}, std::vector<double>{2}), InputError);
    CHECK_THROWS_AS(paired_t_test(a, diffs), InputError);
}

TEST_CASE("evaluate_run skips topics without relevant documents") {
    retrieval::Run run;
    run[1] = {{"r", 1, -1.0}, {"n", 2, -2.0}};
    run[2] = {{"x", 1, -1.0}};
    corpus::Judgments j;
    j.set(1, "r", 1);
    j.set(2, "x", 0);
    testing::CapturedWarnings w;
    const auto records = evaluate_run(run, j);
    REQUIRE(records.size() == 1);
    CHECK(records[0].topic_id == 1);
    CHECK(records[0].ap == 1.0);
    CHECK(w.any_containing("2"));

    std::ostringstream out;
    write_per_topic(out, records);
    CHECK(out.str().find("all\t1.0000") != std::string::npos);
}

TEST_CASE("summaries average per topic") {
    const std::vector<EvalRecord> r{{1, 0.2, 0.4}, {2, 0.6, 0.8}};
    const auto s = summarize(r);
    CHECK(s.topics == 2);
    CHECK(s.map == Approx(0.4));
    CHECK(s.ndcg10 == Approx(0.6));
}

TEST_CASE("cross validation picks on the other fold") {
    const std::vector<int> topics{1, 2, 3, 4};
    Eigen::MatrixXd ap(3, 4), ndcg(3, 4);
    ap << 0.1, 0.1, 0.1, 0.1,  //
        0.5, 0.2, 0.5, 0.2,    // best on odd topics
        0.2, 0.6, 0.2, 0.6;    // best on even topics
    ndcg = ap;
    const auto cv = cross_validate(topics, ap, ndcg);
    CHECK(cv.even.grid_index == 1);  // chosen on odd topics
    CHECK(cv.odd.grid_index == 2);
    CHECK(cv.even.map == Approx(0.2));
    CHECK(cv.odd.map == Approx(0.2));
    CHECK(cv.map == Approx(0.2));
    CHECK(cv.held_out.size() == 4);
}

TEST_CASE("cross validation ties and single points") {
    const std::vector<int> topics{1, 2, 3, 4, 5};
    Eigen::MatrixXd flat = Eigen::MatrixXd::Constant(4, 5, 0.3);
    const auto tie = cross_validate(topics, flat, flat);
    CHECK(tie.even.grid_index == 0);
    CHECK(tie.odd.grid_index == 0);

    Eigen::MatrixXd one(1, 5), nd(1, 5);
    one << 0.1, 0.2, 0.3, 0.4, 0.5;
    nd << 0.5, 0.5, 0.5, 0.5, 0.5;
    const auto single = cross_validate(topics, one, nd);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(single.held_out[i].topic_id == topics[i]);
        CHECK(single.held_out[i].ap == one(0, Eigen::Index(i)));
    }
    CHECK(single.map == Approx((0.3 + (0.1 + 0.3 + 0.5) / 3) / 2));

    const std::vector<int> odd_only{1, 3};
    CHECK_THROWS_AS(cross_validate(odd_only, Eigen::MatrixXd::Zero(1, 2), Eigen::MatrixXd::Zero(1, 2)), InputError);
    CHECK_THROWS_AS(cross_validate(topics, Eigen::MatrixXd::Zero(1, 4), Eigen::MatrixXd::Zero(1, 4)), InputError);
}

TEST_CASE("sweep grid order") {
    SweepGrid g;
    g.pi = {0.25, 0.5};
    g.documents = {1, 2};
    g.terms = {3};
    g.smoothing = {std::nullopt, 0.5};
    CHECK(g.size() == 8);
    CHECK(g.at(0).pi == 0.25);
    CHECK(g.at(1).pi == 0.5);
    CHECK(g.at(2).documents == 2);
    CHECK_FALSE(g.at(3).smoothing);
    CHECK(*g.at(4).smoothing == 0.5);
    CHECK(SweepGrid::defaults().size() == 9 * 5 * 6);
    g.terms.clear();
    CHECK_THROWS_AS(g.validate(), ConfigError);
}

TEST_CASE("sweep selects expansion where it always helps") {
    // Topic 1 asks for "a"; its second relevant document only shares "b" with the first.
    // Topic 2 mirrors it with "p" and "q". Single-word documents outrank both in the first pass.
    const auto index = testing::toy_index({{"d1", "a b b b"},
                                           {"d2", "b c"},
                                           {"d3", "p q q q"},
                                           {"d4", "q r"},
                                           {"n1", "x"},
                                           {"n2", "y"},
                                           {"n3", "z"},
                                           {"n4", "w"}});
    auto bg = std::make_shared<lm::BackgroundModel>(lm::estimate_background(index));
    bg->mass = 3;
    const auto model = lm::LanguageModel::spud(bg, {0.8});
    const std::vector<corpus::TopicQuery> topics{{1, {{"a", 1}}}, {2, {{"p", 1}}}};
    corpus::Judgments j;
    for (auto [t, d] : {std::pair{1, "d1"}, {1, "d2"}, {2, "d3"}, {2, "d4"}}) j.set(t, d, 1);

    feedback::FeedbackParams base;
    base.method = feedback::Method::qtm_spud;
    SweepGrid grid;
    grid.pi = {0.0, 0.5};
    grid.documents = {1};
    grid.terms = {2};
    const auto result = run_sweep(index, model, topics, j, base, grid, 100, nullptr, 1);
    for (Eigen::Index t = 0; t < 2; ++t) CHECK(result.ap(1, t) > result.ap(0, t));
    CHECK(result.cv.even.grid_index == 1);
    CHECK(result.cv.odd.grid_index == 1);
    CHECK(result.cv.map == 1.0);

    const auto threaded = run_sweep(index, model, topics, j, base, grid, 100, nullptr, 4);
    CHECK(threaded.ap == result.ap);
    CHECK(threaded.ndcg == result.ndcg);

    base.method = feedback::Method::none;
    CHECK(run_sweep(index, model, topics, j, base, grid, 100).grid.size() == 1);
}

TEST_CASE("summary table") {
    std::ostringstream out;
    write_summary_table(out, {{"none", "mini", 0.26049, 0.41}, {"qtm_spud", "mini", 0.3, 0.45}});
    const auto text = out.str();
    CHECK(text.find("0.260 (0.410)") != std::string::npos);
    CHECK(text.find("0.300 (0.450)") != std::string::npos);
    CHECK(text.find("mini") != std::string::npos);
}

}  // TEST_SUITE
