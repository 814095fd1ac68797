#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "qtm/corpus/tokenizer.hpp"

namespace qtm::corpus {

/// A tokenized document before it is assigned term ids.
struct Document {
    std::string doc_id;
    std::map<std::string, std::uint32_t> term_counts;
    std::uint32_t token_count = 0;     // |d|
    std::uint32_t distinct_count = 0;  // m_d

    bool empty() const { return token_count == 0; }
    void add(std::string term, std::uint32_t count = 1);
};

/// Streams <DOC> records out of TREC SGML text.
///
/// The document id is the trimmed <DOCNO> content; every other piece of character data
/// inside the record (tags stripped) is tokenized. Records without a DOCNO are skipped with
/// a warning. Broken nesting (a <DOC> inside a <DOC>, a stray </DOC>, an unterminated record
/// or DOCNO) raises ParseError naming the byte offset.
class TrecDocumentReader {
  public:
    TrecDocumentReader(std::istream& in, const Tokenizer& tokenizer);
    TrecDocumentReader(std::string text, const Tokenizer& tokenizer);

    std::optional<Document> next();

  private:
    std::string text_;
    std::size_t pos_ = 0;
    const Tokenizer* tokenizer_;
};

std::vector<Document> parse_trec_documents(std::istream& in, const Tokenizer& tokenizer);

struct TopicQuery {
    int topic_id = 0;
    std::map<std::string, std::uint32_t> terms;

    std::uint32_t length() const;
};

/// One query per <top>, built from the <title> field only. A topic without a title is
/// skipped with a warning; a title that is empty after stopping is a ParseError.
std::vector<TopicQuery> parse_trec_topics(std::istream& in, const Tokenizer& tokenizer);

/// Relevance grades keyed by topic and external document id.
class Judgments {
  public:
    void set(int topic, std::string doc_id, int grade);

    /// Grade of a judged document, or nullopt when unjudged.
    std::optional<int> grade(int topic, std::string_view doc_id) const;
    bool is_relevant(int topic, std::string_view doc_id) const;
    std::size_t relevant_count(int topic) const;
    /// Grades of the relevant (grade > 0) documents of a topic.
    std::vector<int> relevant_grades(int topic) const;
    std::vector<int> topics() const;
    std::size_t size() const;

  private:
    std::map<int, std::unordered_map<std::string, int>> grades_;
};

/// Four whitespace-separated columns per line: topic, iteration (ignored), docno, grade.
/// Later lines overwrite earlier ones for the same (topic, docno).
Judgments parse_qrels(std::istream& in);

}  // namespace qtm::corpus
