#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "qtm/common.hpp"
#include "qtm/corpus/index_io.hpp"
#include "qtm/corpus/inverted_index.hpp"
#include "qtm/corpus/porter_stemmer.hpp"
#include "qtm/corpus/tokenizer.hpp"
#include "qtm/corpus/trec.hpp"
#include "support/helpers.hpp"
#include "support/oracles.hpp"

using namespace qtm;
using namespace qtm::corpus;
namespace fs = std::filesystem;

using testing::CapturedWarnings;
using testing::temp_path;

TEST_SUITE("corpus") {

TEST_CASE("tokenize lowercases, stops and stems") {
    const Tokenizer tok;
    CHECK(tok("Air Traffic control") == std::vector<std::string>{"air", "traffic", "control"});
    CHECK(tok("").empty());
    CHECK(tok("aviation safety") == std::vector<std::string>{"aviat", "safeti"});
    CHECK(tok("the delay, of the flights!") == std::vector<std::string>{"delai", "flight"});
    CHECK(tok("F-16 jets") == std::vector<std::string>{"f", "16", "jet"});
}

TEST_CASE("default stoplist is small and leaves content words alone") {
    const auto stop = Stoplist::default_list();
    CHECK(stop.size() == 25);
    CHECK(stop.contains("the"));
    CHECK_FALSE(stop.contains("said"));
    CHECK_FALSE(stop.contains("from"));
    const auto file = Stoplist::from_file(QTM_DATA_DIR "/stoplist.txt");
    CHECK(file.size() == 25);
}

TEST_CASE("Porter stems match the reference vocabulary") {
    std::ifstream in(QTM_TEST_DATA "/porter_vocabulary.tsv");
    REQUIRE(in);
    std::string word, stem;
    int checked = 0;
    while (in >> word >> stem) {
        CHECK_MESSAGE(porter_stem(word) == stem, word);
        ++checked;
    }
    CHECK(checked > 900);
}

TEST_CASE("tokenize is idempotent on its output for the feedback vocabulary") {
    const Tokenizer tok;
    for (const char* text : {"air traffic control aviation safety delays airlines controllers",
                             "volcanic eruption glacier melting bridge vaccine trial runway pilots"}) {
        const auto once = tok(text);
        std::string joined;
        for (const auto& t : once) joined += t + " ";
        CHECK(tok(joined) == once);
    }
}

TEST_CASE("stemming a stem is not always a fixed point") {
    // Expansion terms are looked up as stems and never re-tokenized, which is why this matters.
    CHECK(porter_stem("suspension") == "suspens");
    CHECK(porter_stem("suspens") == "suspen");
    CHECK(porter_stem(porter_stem("controllers")) == "control");
}

TEST_CASE("parse documents") {
    const Tokenizer tok;
    std::istringstream in(
        "<DOC><DOCNO> d1 </DOCNO><TEXT>air air traffic</TEXT></DOC>\n"
        "<DOC>\n<DOCNO>d2</DOCNO>\n<HEAD>Control</HEAD><TEXT>tower</TEXT>\n</DOC>");
    const auto docs = parse_trec_documents(in, tok);
    REQUIRE(docs.size() == 2);
    CHECK(docs[0].doc_id == "d1");
    CHECK(docs[0].token_count == 3);
    CHECK(docs[0].distinct_count == 2);
    CHECK(docs[0].term_counts.at("air") == 2);
    CHECK(docs[1].term_counts.at("control") == 1);
    CHECK(docs[1].term_counts.at("tower") == 1);
}

TEST_CASE("parse documents: broken nesting names the byte offset") {
    const Tokenizer tok;
    std::istringstream nested("<DOC><DOCNO>a</DOCNO><DOC></DOC>");
    CHECK_THROWS_WITH_AS(parse_trec_documents(nested, tok), doctest::Contains("byte 21"), ParseError);
    std::istringstream stray("</DOC>");
    CHECK_THROWS_AS(parse_trec_documents(stray, tok), ParseError);
    std::istringstream open("<DOC><DOCNO>a</DOCNO> text");
    CHECK_THROWS_AS(parse_trec_documents(open, tok), ParseError);
}

TEST_CASE("parse documents: missing DOCNO skips, empty text is kept") {
    CapturedWarnings w;
    const Tokenizer tok;
    std::istringstream in("<DOC><TEXT>orphan</TEXT></DOC><DOC><DOCNO>e</DOCNO><TEXT></TEXT></DOC>");
    const auto docs = parse_trec_documents(in, tok);
    REQUIRE(docs.size() == 1);
    CHECK(docs[0].doc_id == "e");
    CHECK(docs[0].empty());
    CHECK(w.messages.size() == 2);
}

TEST_CASE("parse topics: title only") {
    const Tokenizer tok;
    std::istringstream in(
        "<top>\n<num> Number: 697\n<title> air traffic control\n<desc> Description:\nsomething else entirely\n"
        "<narr> Narrative:\nmore words\n</top>\n"
        "<top><num> Number: 698 <title> control control </top>");
    const auto topics = parse_trec_topics(in, tok);
    REQUIRE(topics.size() == 2);
    CHECK(topics[0].topic_id == 697);
    CHECK(topics[0].terms == std::map<std::string, std::uint32_t>{{"air", 1}, {"control", 1}, {"traffic", 1}});
    CHECK(topics[1].terms == std::map<std::string, std::uint32_t>{{"control", 2}});
}

TEST_CASE("parse topics: missing title skips, stopped-out title is an error") {
    const Tokenizer tok;
    {
        CapturedWarnings w;
        std::istringstream in("<top><num> Number: 1 <desc> x </top><top><num> Number: 2 <title> bridge </top>");
        const auto topics = parse_trec_topics(in, tok);
        REQUIRE(topics.size() == 1);
        CHECK(topics[0].topic_id == 2);
        CHECK(w.messages.size() == 1);
    }
    std::istringstream empty("<top><num> Number: 3 <title> the of and </top>");
    CHECK_THROWS_AS(parse_trec_topics(empty, tok), ParseError);
}

TEST_CASE("parse qrels") {
    std::istringstream in("697 0 FT911-1 1\n697 0 FT911-2 0\n697 0 FT911-3 0\n697 0 FT911-3 1\n");
    const auto j = parse_qrels(in);
    CHECK(j.grade(697, "FT911-1") == 1);
    CHECK(j.grade(697, "FT911-2") == 0);
    CHECK_FALSE(j.is_relevant(697, "FT911-2"));
    CHECK(j.grade(697, "FT911-3") == 1);  // last writer wins
    CHECK(j.relevant_count(697) == 2);
    CHECK_FALSE(j.grade(697, "unjudged").has_value());

    std::istringstream bad("697 0 FT911-1 1\n697 0 FT911-2 x\n");
    CHECK_THROWS_WITH_AS(parse_qrels(bad), doctest::Contains("line 2"), ParseError);
}

TEST_CASE("build_index statistics") {
    const auto index = testing::toy_index({{"d1", "a a b"}, {"d2", "a c"}});
    const auto& s = index.stats();
    const auto& lex = index.lexicon();
    CHECK(s.df[*lex.find("a")] == 2);
    CHECK(s.df[*lex.find("b")] == 1);
    CHECK(s.df[*lex.find("c")] == 1);
    CHECK(s.df_total == 4);
    CHECK(s.ctf[*lex.find("a")] == 3);
    CHECK(s.token_total == 5);

    const auto all = testing::toy_index({{"x", "q r"}, {"y", "q"}, {"z", "q s"}});
    CHECK(all.stats().df[*all.lexicon().find("q")] == 3);
    CHECK(all.stats().doc_count == 3);
}

TEST_CASE("build_index errors") {
    CHECK_THROWS_WITH_AS(build_index({}), doctest::Contains("empty corpus"), InputError);
    std::vector<Document> dup{testing::make_document("d1", {{"a", 1}}), testing::make_document("d1", {{"b", 1}})};
    CHECK_THROWS_WITH_AS(build_index(std::move(dup)), doctest::Contains("d1"), InputError);
}

TEST_CASE("empty documents stay in the table but out of the statistics") {
    std::vector<Document> docs{testing::make_document("full", {{"a", 2}}), testing::make_document("empty", {})};
    const auto index = build_index(std::move(docs));
    CHECK(index.document_count() == 2);
    CHECK(index.stats().doc_count == 1);
    CHECK(index.stats().df[*index.lexicon().find("a")] == 1);
    CHECK(index.postings(*index.lexicon().find("a")).size() == 1);
}

TEST_CASE("postings agree with the statistics on random corpora") {
    std::mt19937 rng(7);
    for (int round = 0; round < 20; ++round) {
        std::vector<Document> docs;
        const int n = 1 + int(rng() % 15);
        for (int i = 0; i < n; ++i) {
            std::map<std::string, std::uint32_t> counts;
            const int len = int(rng() % 12);
            for (int k = 0; k < len; ++k) ++counts[std::string(1, char('a' + rng() % 8))];
            docs.push_back(testing::make_document("doc" + std::to_string(i), counts));
        }
        const auto index = build_index(docs);
        const auto& s = index.stats();
        std::uint64_t df_total = 0, tokens = 0;
        for (TermId t = 0; t < index.lexicon().size(); ++t) {
            const auto postings = index.postings(t);
            CHECK(postings.size() == s.df[t]);
            std::uint64_t ctf = 0;
            for (std::size_t i = 0; i < postings.size(); ++i) {
                ctf += postings[i].count;
                if (i) CHECK(postings[i - 1].doc < postings[i].doc);
            }
            CHECK(ctf == s.ctf[t]);
            CHECK(s.ctf[t] >= s.df[t]);
            CHECK(s.df[t] <= s.doc_count);
            df_total += s.df[t];
            tokens += s.ctf[t];
        }
        CHECK(df_total == s.df_total);
        CHECK(tokens == s.token_total);

        // Round trip through the file format.
        const auto path = temp_path("roundtrip.idx");
        auto annotated = index;
        annotated.set_metadata("background_mass", "12.5");
        persist_index(annotated, path);
        CHECK(load_index(path) == annotated);
        fs::remove(path);
    }
}

TEST_CASE("load_index failures") {
    CHECK_THROWS_AS(load_index(temp_path("does_not_exist.idx")), NotFoundError);

    const auto index = testing::toy_index({{"d1", "a a b"}, {"d2", "a c"}});
    const auto path = temp_path("corrupt.idx");
    persist_index(index, path);
    std::string bytes;
    {
        std::ifstream in(path, std::ios::binary);
        bytes.assign(std::istreambuf_iterator<char>(in), {});
    }
    auto write = [&](const std::string& content) {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out << content;
    };

    auto magic = bytes;
    magic[0] = 'X';
    write(magic);
    CHECK_THROWS_AS(load_index(path), IntegrityError);

    auto version = bytes;
    version[8] = char(kIndexFormatVersion + 1);
    write(version);
    const auto bumped = std::to_string(kIndexFormatVersion + 1);
    CHECK_THROWS_WITH_AS(load_index(path), doctest::Contains(bumped.c_str()), IntegrityError);

    write(bytes.substr(0, bytes.size() / 2));
    CHECK_THROWS_AS(load_index(path), IntegrityError);

    auto flipped = bytes;
    flipped[bytes.size() / 2] ^= 0x5a;
    write(flipped);
    CHECK_THROWS_AS(load_index(path), IntegrityError);
    fs::remove(path);
}

}  // TEST_SUITE
