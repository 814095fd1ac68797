#pragma once

// The bundled mini-corpus, its frozen oracle values, and a one-call evaluation helper.

#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "qtm/common.hpp"
#include "qtm/corpus/inverted_index.hpp"
#include "qtm/corpus/trec.hpp"
#include "qtm/eval/metrics.hpp"
#include "qtm/feedback/pipeline.hpp"
#include "qtm/lm/background.hpp"
#include "qtm/lm/document_model.hpp"
#include "qtm/retrieval/run_io.hpp"

namespace qtm::testing {

/// Rows of the oracle file, split on tabs, keyed by their first field.
using OracleRows = std::multimap<std::string, std::vector<std::string>>;

inline OracleRows load_oracle(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw NotFoundError("cannot open " + path);
    OracleRows rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> fields;
        std::istringstream ls(line);
        std::string f;
        while (std::getline(ls, f, '\t')) fields.push_back(f);
        const auto key = fields.front();
        fields.erase(fields.begin());
        rows.emplace(key, std::move(fields));
    }
    return rows;
}

inline double oracle_value(const OracleRows& rows, const std::string& key, const std::string& name = "") {
    for (auto [it, end] = rows.equal_range(key); it != end; ++it) {
        if (name.empty()) return std::stod(it->second.at(0));
        if (it->second.at(0) == name) return std::stod(it->second.at(1));
    }
    throw InputError("oracle has no " + key + " " + name);
}

struct MiniCorpus {
    corpus::InvertedIndex index;
    std::vector<corpus::TopicQuery> topics;
    corpus::Judgments qrels;
    OracleRows oracle;

    static const MiniCorpus& get() {
        static const MiniCorpus mini = [] {
            const corpus::Tokenizer tok;
            std::ifstream docs(QTM_MINICORPUS "/documents.trec"), topics(QTM_MINICORPUS "/topics.txt"),
                qrels(QTM_MINICORPUS "/qrels.txt");
            return MiniCorpus{corpus::build_index(corpus::parse_trec_documents(docs, tok)),
                              corpus::parse_trec_topics(topics, tok), corpus::parse_qrels(qrels),
                              load_oracle(QTM_TEST_DATA "/minicorpus_expected.tsv")};
        }();
        return mini;
    }

    /// SPUD retrieval with the given background mass.
    lm::LanguageModel spud(double mass, double omega = 0.8) const {
        auto bg = std::make_shared<lm::BackgroundModel>(lm::estimate_background(index));
        bg->mass = mass;
        return lm::LanguageModel::spud(bg, {omega});
    }

    /// MAP and NDCG@10 over every topic.
    eval::Summary evaluate(const lm::LanguageModel& model, const feedback::FeedbackParams& params) const {
        retrieval::Run run;
        for (const auto& t : topics) {
            const auto r = feedback::run_feedback(index, model, t, params, eval::kEvaluationDepth);
            auto& entries = run[t.topic_id];
            int rank = 1;
            for (const auto& e : r.ranking.entries) entries.push_back({index.document(e.doc).doc_id, rank++, e.score});
        }
        const auto records = eval::evaluate_run(run, qrels);
        return eval::summarize(records);
    }
};

}  // namespace qtm::testing
