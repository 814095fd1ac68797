#include "qtm/corpus/trec.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "qtm/common.hpp"

namespace qtm::corpus {

void Document::add(std::string term, std::uint32_t count) {
    auto [it, inserted] = term_counts.try_emplace(std::move(term), 0);
    if (inserted) ++distinct_count;
    it->second += count;
    token_count += count;
}

namespace {

std::string read_all(std::istream& in) {
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string upper(std::string_view s) {
    std::string out(s);
    for (auto& c : out) {
        if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
    }
    return out;
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

struct Tag {
    std::size_t begin = 0;  // offset of '<'
    std::size_t end = 0;    // one past '>'
    bool closing = false;
    std::string name;       // uppercased
};

// Next markup tag at or after `from`; nullopt when there is none.
std::optional<Tag> next_tag(std::string_view text, std::size_t from) {
    while (true) {
        const auto lt = text.find('<', from);
        if (lt == std::string_view::npos) return std::nullopt;
        const auto gt = text.find('>', lt + 1);
        if (gt == std::string_view::npos) return std::nullopt;
        Tag tag;
        tag.begin = lt;
        tag.end = gt + 1;
        std::size_t i = lt + 1;
        if (i < gt && text[i] == '/') {
            tag.closing = true;
            ++i;
        }
        const auto name_end = text.find_first_of(" \t\r\n>", i);
        tag.name = upper(text.substr(i, std::min(name_end, gt) - i));
        if (!tag.name.empty()) return tag;
        from = gt + 1;
    }
}

std::string offset_message(std::string_view what, std::size_t offset) {
    return std::string(what) + " at byte " + std::to_string(offset);
}

}  // namespace

TrecDocumentReader::TrecDocumentReader(std::istream& in, const Tokenizer& tokenizer)
    : text_(read_all(in)), tokenizer_(&tokenizer) {}

TrecDocumentReader::TrecDocumentReader(std::string text, const Tokenizer& tokenizer)
    : text_(std::move(text)), tokenizer_(&tokenizer) {}

std::optional<Document> TrecDocumentReader::next() {
    const std::string_view text(text_);
    while (true) {
        // Find the opening <DOC>.
        std::optional<Tag> tag;
        while ((tag = next_tag(text, pos_))) {
            pos_ = tag->end;
            if (tag->name != "DOC") continue;
            if (tag->closing) throw ParseError(offset_message("unexpected </DOC>", tag->begin));
            break;
        }
        if (!tag) {
            pos_ = text.size();
            return std::nullopt;
        }
        const std::size_t doc_begin = tag->begin;

        Document doc;
        bool have_docno = false;
        bool closed = false;
        auto tokenize = [&](std::string_view chunk) {
            tokenizer_->for_each(chunk, [&](std::string term) { doc.add(std::move(term)); });
        };

        std::size_t cursor = pos_;
        while (auto inner = next_tag(text, cursor)) {
            tokenize(text.substr(cursor, inner->begin - cursor));
            cursor = inner->end;
            if (inner->name == "DOC") {
                if (!inner->closing) {
                    throw ParseError(offset_message("nested <DOC>", inner->begin));
                }
                closed = true;
                break;
            }
            if (inner->name == "DOCNO" && !inner->closing) {
                auto close = next_tag(text, cursor);
                if (!close || close->name != "DOCNO" || !close->closing) {
                    throw ParseError(offset_message("unterminated <DOCNO>", inner->begin));
                }
                doc.doc_id = std::string(trim(text.substr(cursor, close->begin - cursor)));
                have_docno = !doc.doc_id.empty();
                cursor = close->end;
            }
        }
        if (!closed) {
            throw ParseError(offset_message("unterminated <DOC>", doc_begin));
        }
        pos_ = cursor;

        if (!have_docno) {
            warn(offset_message("skipping <DOC> without DOCNO", doc_begin));
            continue;
        }
        if (doc.empty()) {
            warn("document '" + doc.doc_id + "' has no indexable text");
        }
        return doc;
    }
}

std::vector<Document> parse_trec_documents(std::istream& in, const Tokenizer& tokenizer) {
    TrecDocumentReader reader(in, tokenizer);
    std::vector<Document> docs;
    while (auto doc = reader.next()) docs.push_back(std::move(*doc));
    return docs;
}

std::uint32_t TopicQuery::length() const {
    std::uint32_t n = 0;
    for (const auto& [term, count] : terms) n += count;
    return n;
}

std::vector<TopicQuery> parse_trec_topics(std::istream& in, const Tokenizer& tokenizer) {
    const std::string text = read_all(in);
    const std::string_view view(text);
    std::vector<TopicQuery> topics;

    std::size_t pos = 0;
    while (auto tag = next_tag(view, pos)) {
        pos = tag->end;
        if (tag->name != "TOP" || tag->closing) continue;
        const std::size_t top_begin = tag->begin;

        std::optional<int> number;
        std::optional<std::string_view> title;
        std::size_t cursor = pos;
        bool closed = false;
        while (auto inner = next_tag(view, cursor)) {
            cursor = inner->end;
            if (inner->name == "TOP") {
                if (!inner->closing) throw ParseError(offset_message("nested <top>", inner->begin));
                closed = true;
                break;
            }
            if (inner->closing) continue;
            // Field content runs up to the next tag.
            const auto stop = view.find('<', cursor);
            const auto content = view.substr(cursor, (stop == std::string_view::npos ? view.size() : stop) - cursor);
            if (inner->name == "NUM") {
                const auto digits = content.find_first_of("0123456789");
                int value = 0;
                if (digits == std::string_view::npos ||
                    std::from_chars(content.data() + digits, content.data() + content.size(), value).ec != std::errc{}) {
                    throw ParseError(offset_message("topic number is not an integer", inner->begin));
                }
                number = value;
            } else if (inner->name == "TITLE") {
                auto t = trim(content);
                if (t.size() >= 6 && upper(t.substr(0, 6)) == "TOPIC:") t = trim(t.substr(6));
                title = t;
            }
        }
        if (!closed) throw ParseError(offset_message("unterminated <top>", top_begin));
        pos = cursor;

        if (!number) throw ParseError(offset_message("topic without <num>", top_begin));
        if (!title || title->empty()) {
            warn("skipping topic " + std::to_string(*number) + " without a title");
            continue;
        }
        TopicQuery query;
        query.topic_id = *number;
        tokenizer.for_each(*title, [&](std::string term) { ++query.terms[std::move(term)]; });
        if (query.terms.empty()) {
            throw ParseError("topic " + std::to_string(*number) + ": title is empty after stopping");
        }
        topics.push_back(std::move(query));
    }
    return topics;
}

void Judgments::set(int topic, std::string doc_id, int grade) {
    grades_[topic][std::move(doc_id)] = grade;
}

std::optional<int> Judgments::grade(int topic, std::string_view doc_id) const {
    const auto t = grades_.find(topic);
    if (t == grades_.end()) return std::nullopt;
    const auto d = t->second.find(std::string(doc_id));
    if (d == t->second.end()) return std::nullopt;
    return d->second;
}

bool Judgments::is_relevant(int topic, std::string_view doc_id) const {
    const auto g = grade(topic, doc_id);
    return g && *g > 0;
}

std::size_t Judgments::relevant_count(int topic) const {
    return relevant_grades(topic).size();
}

std::vector<int> Judgments::relevant_grades(int topic) const {
    std::vector<int> out;
    const auto t = grades_.find(topic);
    if (t == grades_.end()) return out;
    for (const auto& [doc, g] : t->second) {
        if (g > 0) out.push_back(g);
    }
    return out;
}

std::vector<int> Judgments::topics() const {
    std::vector<int> out;
    for (const auto& [topic, _] : grades_) out.push_back(topic);
    return out;
}

std::size_t Judgments::size() const {
    std::size_t n = 0;
    for (const auto& [_, docs] : grades_) n += docs.size();
    return n;
}

Judgments parse_qrels(std::istream& in) {
    Judgments judgments;
    std::string line;
    std::size_t line_no = 0;
    bool warned_negative = false;
    auto parse_int = [&](const std::string& field, const char* what) {
        int value = 0;
        const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
        if (ec != std::errc{} || ptr != field.data() + field.size()) {
            throw ParseError("qrels line " + std::to_string(line_no) + ": " + what + " '" + field +
                             "' is not an integer");
        }
        return value;
    };
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream fields(line);
        std::string topic, iteration, docno, grade, extra;
        if (!(fields >> topic)) continue;
        if (!(fields >> iteration >> docno >> grade) || (fields >> extra)) {
            throw ParseError("qrels line " + std::to_string(line_no) + ": expected 4 columns");
        }
        const int topic_id = parse_int(topic, "topic");
        int g = parse_int(grade, "grade");
        if (g < 0) {
            if (!warned_negative) {
                warn("qrels line " + std::to_string(line_no) + ": negative grade treated as non-relevant");
                warned_negative = true;
            }
            g = 0;
        }
        judgments.set(topic_id, std::move(docno), g);
    }
    return judgments;
}

}  // namespace qtm::corpus
