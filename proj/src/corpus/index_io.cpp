#include "qtm/corpus/index_io.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string_view>

namespace qtm::corpus {

namespace {

constexpr std::array<char, 8> kMagic = {'Q', 'T', 'M', 'I', 'N', 'D', 'E', 'X'};

constexpr std::uint32_t fourcc(const char (&s)[5]) {
    return static_cast<std::uint32_t>(static_cast<unsigned char>(s[0])) |
           (static_cast<std::uint32_t>(static_cast<unsigned char>(s[1])) << 8) |
           (static_cast<std::uint32_t>(static_cast<unsigned char>(s[2])) << 16) |
           (static_cast<std::uint32_t>(static_cast<unsigned char>(s[3])) << 24);
}

constexpr std::uint32_t kStats = fourcc("STAT");
constexpr std::uint32_t kLexicon = fourcc("LEXI");
constexpr std::uint32_t kPostings = fourcc("POST");
constexpr std::uint32_t kDocuments = fourcc("DOCS");
constexpr std::uint32_t kMetadata = fourcc("META");

std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

class Writer {
  public:
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }
    void str(std::string_view s) {
        u64(s.size());
        buf_.append(s);
    }
    void raw(std::string_view s) { buf_.append(s); }
    void section(std::uint32_t tag, const Writer& payload) {
        u32(tag);
        str(payload.buf_);
    }
    const std::string& bytes() const { return buf_; }

  private:
    std::string buf_;
};

class Reader {
  public:
    explicit Reader(std::string_view data) : data_(data) {}

    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
        pos_ += 4;
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
        pos_ += 8;
        return v;
    }
    std::string_view bytes(std::uint64_t n) {
        need(n);
        auto out = data_.substr(pos_, n);
        pos_ += n;
        return out;
    }
    std::string str() { return std::string(bytes(u64())); }
    bool done() const { return pos_ == data_.size(); }

  private:
    void need(std::uint64_t n) const {
        if (n > data_.size() - pos_) throw IntegrityError("index file is truncated");
    }

    std::string_view data_;
    std::size_t pos_ = 0;
};

}  // namespace

void persist_index(const InvertedIndex& index, const std::filesystem::path& path) {
    const auto& stats = index.stats();
    const auto vocab = index.lexicon().size();

    Writer stat;
    stat.u64(stats.doc_count);
    stat.u64(stats.df_total);
    stat.u64(stats.token_total);
    stat.u64(vocab);
    for (std::size_t t = 0; t < vocab; ++t) {
        stat.u32(stats.df[t]);
        stat.u64(stats.ctf[t]);
    }

    Writer lex;
    lex.u64(vocab);
    for (const auto& term : index.lexicon().terms()) lex.str(term);

    Writer post;
    post.u64(vocab);
    for (TermId t = 0; t < vocab; ++t) {
        const auto list = index.postings(t);
        post.u64(list.size());
        for (const auto& p : list) {
            post.u32(p.doc);
            post.u32(p.count);
        }
    }

    Writer docs;
    docs.u64(index.document_count());
    for (const auto& doc : index.documents()) {
        docs.str(doc.doc_id);
        docs.u32(doc.token_count);
        docs.u32(doc.distinct_count);
        docs.u64(doc.terms.size());
        for (const auto& tc : doc.terms) {
            docs.u32(tc.term);
            docs.u32(tc.count);
        }
    }

    Writer meta;
    meta.u64(index.metadata().size());
    for (const auto& [k, v] : index.metadata()) {
        meta.str(k);
        meta.str(v);
    }

    Writer file;
    file.raw(std::string_view(kMagic.data(), kMagic.size()));
    file.u32(kIndexFormatVersion);
    file.u32(5);
    file.section(kStats, stat);
    file.section(kLexicon, lex);
    file.section(kPostings, post);
    file.section(kDocuments, docs);
    file.section(kMetadata, meta);
    const auto checksum = fnv1a(file.bytes());
    file.u64(checksum);

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write index '" + path.string() + "'");
    out.write(file.bytes().data(), static_cast<std::streamsize>(file.bytes().size()));
    if (!out) throw Error("failed writing index '" + path.string() + "'");
}

InvertedIndex load_index(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw NotFoundError("index '" + path.string() + "' not found");
    const std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    if (data.size() < kMagic.size() || std::memcmp(data.data(), kMagic.data(), kMagic.size()) != 0) {
        throw IntegrityError("'" + path.string() + "' is not an index file (bad magic)");
    }
    Reader header(std::string_view(data).substr(kMagic.size()));
    const auto version = header.u32();
    if (version != kIndexFormatVersion) {
        throw IntegrityError("index format version " + std::to_string(version) + " is not supported (expected " +
                             std::to_string(kIndexFormatVersion) + ")");
    }
    if (data.size() < kMagic.size() + 8 + 8) throw IntegrityError("index file is truncated");
    const std::string_view body(data.data(), data.size() - 8);
    Reader trailer(std::string_view(data).substr(data.size() - 8));
    if (trailer.u64() != fnv1a(body)) {
        throw IntegrityError("index checksum mismatch (file truncated or corrupt)");
    }

    Reader file(body.substr(kMagic.size()));
    file.u32();
    const auto sections = file.u32();

    Lexicon lexicon;
    std::vector<std::vector<Posting>> postings;
    std::vector<DocumentRecord> documents;
    CollectionStats stats;
    std::map<std::string, std::string> metadata;
    unsigned seen = 0;

    for (std::uint32_t s = 0; s < sections; ++s) {
        const auto tag = file.u32();
        Reader payload(file.bytes(file.u64()));
        if (tag == kStats) {
            stats.doc_count = payload.u64();
            stats.df_total = payload.u64();
            stats.token_total = payload.u64();
            const auto vocab = payload.u64();
            stats.df.resize(vocab);
            stats.ctf.resize(vocab);
            for (std::size_t t = 0; t < vocab; ++t) {
                stats.df[t] = payload.u32();
                stats.ctf[t] = payload.u64();
            }
            seen |= 1;
        } else if (tag == kLexicon) {
            const auto vocab = payload.u64();
            std::vector<std::string> terms;
            terms.reserve(vocab);
            for (std::size_t t = 0; t < vocab; ++t) terms.push_back(payload.str());
            lexicon = Lexicon(std::move(terms));
            seen |= 2;
        } else if (tag == kPostings) {
            const auto vocab = payload.u64();
            postings.resize(vocab);
            for (auto& list : postings) {
                const auto n = payload.u64();
                list.reserve(n);
                for (std::size_t i = 0; i < n; ++i) {
                    const auto doc = payload.u32();
                    list.push_back({doc, payload.u32()});
                }
            }
            seen |= 4;
        } else if (tag == kDocuments) {
            const auto n = payload.u64();
            documents.reserve(n);
            for (std::size_t i = 0; i < n; ++i) {
                DocumentRecord doc;
                doc.doc_id = payload.str();
                doc.token_count = payload.u32();
                doc.distinct_count = payload.u32();
                const auto terms = payload.u64();
                doc.terms.reserve(terms);
                for (std::size_t j = 0; j < terms; ++j) {
                    const auto term = payload.u32();
                    doc.terms.push_back({term, payload.u32()});
                }
                documents.push_back(std::move(doc));
            }
            seen |= 8;
        } else if (tag == kMetadata) {
            const auto n = payload.u64();
            for (std::size_t i = 0; i < n; ++i) {
                auto key = payload.str();
                metadata[std::move(key)] = payload.str();
            }
            seen |= 16;
        } else {
            throw IntegrityError("unknown index section");
        }
        if (!payload.done()) throw IntegrityError("index section has trailing bytes");
    }
    if (seen != 31 || !file.done()) throw IntegrityError("index file is missing sections");

    const auto vocab = lexicon.size();
    if (stats.df.size() != vocab || postings.size() != vocab) {
        throw IntegrityError("index sections disagree on vocabulary size");
    }
    for (const auto& list : postings) {
        for (const auto& p : list) {
            if (p.doc >= documents.size()) throw IntegrityError("posting references a missing document");
        }
    }
    for (const auto& doc : documents) {
        for (const auto& tc : doc.terms) {
            if (tc.term >= vocab) throw IntegrityError("document references a missing term");
        }
    }
    return InvertedIndex(std::move(lexicon), std::move(postings), std::move(documents), std::move(stats),
                         std::move(metadata));
}

}  // namespace qtm::corpus
