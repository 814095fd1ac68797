#include "qtm/corpus/tokenizer.hpp"

#include <fstream>
#include <sstream>

#include "qtm/common.hpp"
#include "qtm/corpus/porter_stemmer.hpp"

namespace qtm::corpus {

namespace {

// Mirrors data/stoplist.txt so the library works without the data directory.
constexpr std::string_view kDefaultStopwords[] = {
    "a",  "an", "the", "and", "or", "but", "of",  "to",   "in",   "on",   "at",   "by",   "for",
    "with", "as", "is", "are", "was", "were", "be", "been", "it", "its", "that", "this",
};

}  // namespace

Stoplist Stoplist::default_list() {
    std::unordered_set<std::string> words;
    for (auto w : kDefaultStopwords) words.emplace(w);
    return Stoplist(std::move(words));
}

Stoplist Stoplist::parse(std::string_view text) {
    std::unordered_set<std::string> words;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto last = line.find_last_not_of(" \t\r");
        std::string word = line.substr(first, last - first + 1);
        for (auto& c : word) {
            if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        }
        words.insert(std::move(word));
    }
    return Stoplist(std::move(words));
}

Stoplist Stoplist::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw NotFoundError("cannot open stoplist '" + path.string() + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
}

std::string Tokenizer::normalize(std::string_view raw) const {
    std::string lowered(raw);
    for (auto& c : lowered) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    if (stoplist_.contains(lowered)) return {};
    return porter_stem(lowered);
}

std::vector<std::string> Tokenizer::operator()(std::string_view text) const {
    std::vector<std::string> out;
    for_each(text, [&](std::string term) { out.push_back(std::move(term)); });
    return out;
}

}  // namespace qtm::corpus
