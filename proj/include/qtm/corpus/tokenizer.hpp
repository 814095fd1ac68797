#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace qtm::corpus {

class Stoplist {
  public:
    Stoplist() = default;
    explicit Stoplist(std::unordered_set<std::string> words) : words_(std::move(words)) {}

    /// The 25-word function-word list shipped in data/stoplist.txt.
    static Stoplist default_list();
    /// Newline-separated words; '#' starts a comment line.
    static Stoplist from_file(const std::filesystem::path& path);
    static Stoplist parse(std::string_view text);

    bool contains(std::string_view word) const { return words_.contains(std::string(word)); }
    std::size_t size() const { return words_.size(); }

  private:
    std::unordered_set<std::string> words_;
};

/// Lowercases, splits on runs of non-alphanumeric ASCII characters, drops stopwords
/// (matched on the surface form) and Porter-stems what remains. Order is preserved.
class Tokenizer {
  public:
    Tokenizer() : stoplist_(Stoplist::default_list()) {}
    explicit Tokenizer(Stoplist stoplist) : stoplist_(std::move(stoplist)) {}

    std::vector<std::string> operator()(std::string_view text) const;

    /// Calls `sink(term)` for every emitted term without materializing the sequence.
    template <typename Sink>
    void for_each(std::string_view text, Sink&& sink) const;

    const Stoplist& stoplist() const { return stoplist_; }

  private:
    std::string normalize(std::string_view raw) const;

    Stoplist stoplist_;
};

namespace detail {
inline bool is_token_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}
}  // namespace detail

template <typename Sink>
void Tokenizer::for_each(std::string_view text, Sink&& sink) const {
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && !detail::is_token_char(text[i])) ++i;
        const std::size_t start = i;
        while (i < text.size() && detail::is_token_char(text[i])) ++i;
        if (i > start) {
            auto term = normalize(text.substr(start, i - start));
            if (!term.empty()) sink(std::move(term));
        }
    }
}

}  // namespace qtm::corpus
