#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "qtm/common.hpp"
#include "qtm/corpus/trec.hpp"

namespace qtm::corpus {

/// Bidirectional term <-> id table. Ids are dense and, for built indexes, assigned in
/// lexicographic term order.
class Lexicon {
  public:
    Lexicon() = default;
    explicit Lexicon(std::vector<std::string> terms);

    std::optional<TermId> find(std::string_view term) const;
    const std::string& term(TermId id) const { return terms_[id]; }
    std::size_t size() const { return terms_.size(); }
    const std::vector<std::string>& terms() const { return terms_; }

    /// Appends a term that is not yet present and returns its id.
    TermId add(std::string term);

    friend bool operator==(const Lexicon& a, const Lexicon& b) { return a.terms_ == b.terms_; }

  private:
    std::vector<std::string> terms_;
    std::unordered_map<std::string, TermId> ids_;
};

struct Posting {
    DocId doc;
    std::uint32_t count;

    friend bool operator==(const Posting&, const Posting&) = default;
};

/// Indexed form of a Document: term counts keyed by TermId, sorted by id.
struct DocumentRecord {
    std::string doc_id;
    std::uint32_t token_count = 0;     // |d|
    std::uint32_t distinct_count = 0;  // m_d
    std::vector<TermCount> terms;

    bool empty() const { return token_count == 0; }
    std::uint32_t count(TermId term) const;

    friend bool operator==(const DocumentRecord&, const DocumentRecord&) = default;
};

struct CollectionStats {
    std::uint64_t doc_count = 0;       // N, non-empty documents only
    std::vector<std::uint32_t> df;     // per TermId
    std::uint64_t df_total = 0;        // sum of df
    std::vector<std::uint64_t> ctf;    // per TermId
    std::uint64_t token_total = 0;     // sum of ctf

    friend bool operator==(const CollectionStats&, const CollectionStats&) = default;
};

/// Immutable after construction; safe to share across concurrent readers.
class InvertedIndex {
  public:
    /// Throws InputError on an empty document sequence or a duplicate doc_id.
    /// Documents with |d| = 0 are kept in the document table but never posted.
    static InvertedIndex build(std::vector<Document> documents);

    InvertedIndex(Lexicon lexicon, std::vector<std::vector<Posting>> postings,
                  std::vector<DocumentRecord> documents, CollectionStats stats,
                  std::map<std::string, std::string> metadata = {});

    const Lexicon& lexicon() const { return lexicon_; }
    const CollectionStats& stats() const { return stats_; }
    std::span<const Posting> postings(TermId term) const { return postings_[term]; }
    const DocumentRecord& document(DocId id) const { return documents_[id]; }
    std::size_t document_count() const { return documents_.size(); }
    std::span<const DocumentRecord> documents() const { return documents_; }
    std::optional<DocId> find_document(std::string_view doc_id) const;

    /// Free-form key/value annotations persisted with the index (e.g. a cached estimate).
    const std::map<std::string, std::string>& metadata() const { return metadata_; }
    void set_metadata(std::string key, std::string value) { metadata_[std::move(key)] = std::move(value); }

    friend bool operator==(const InvertedIndex& a, const InvertedIndex& b);

  private:
    Lexicon lexicon_;
    std::vector<std::vector<Posting>> postings_;
    std::vector<DocumentRecord> documents_;
    CollectionStats stats_;
    std::map<std::string, std::string> metadata_;
    std::unordered_map<std::string, DocId> doc_ids_;
};

inline InvertedIndex build_index(std::vector<Document> documents) {
    return InvertedIndex::build(std::move(documents));
}

}  // namespace qtm::corpus
