#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <string>
#include <vector>

#include "qmine/common/csv.hpp"
#include "qmine/common/errors.hpp"
#include "qmine/common/jsonl.hpp"
#include "qmine/common/log.hpp"
#include "qmine/common/rng.hpp"
#include "qmine/common/sha256.hpp"
#include "qmine/common/text.hpp"
#include "testing.hpp"

using namespace qmine;
using testing_support::TempDir;

TEST_CASE("sha256 known vectors") {
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
          "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
    // one million 'a's, streamed in uneven chunks
    Sha256 h;
    std::string chunk(997, 'a');
    size_t fed = 0;
    while (fed + chunk.size() <= 1000000) {
        h.update(chunk);
        fed += chunk.size();
    }
    h.update(std::string(1000000 - fed, 'a'));
    CHECK(h.hex_digest() == "cdc76e5c9914fb9281a1c7e284d73e67f1809a48a497200e046d39ccc7112cd0");
}

TEST_CASE("sha256 file digest matches in-memory digest") {
    TempDir tmp;
    std::string payload = "line one\nline two\n";
    testing_support::write_text(tmp.file("f.txt"), payload);
    CHECK(sha256_file_hex(tmp.file("f.txt")) == sha256_hex(payload));
}

TEST_CASE("whitespace tokens") {
    auto toks = text::whitespace_tokens("  a\tbb \n ccc ");
    REQUIRE(toks.size() == 3);
    CHECK(toks[0] == "a");
    CHECK(toks[1] == "bb");
    CHECK(toks[2] == "ccc");
    CHECK(text::count_whitespace_tokens("") == 0);
    CHECK(text::count_whitespace_tokens("   ") == 0);
    CHECK(text::count_whitespace_tokens("one") == 1);
}

TEST_CASE("text helpers") {
    CHECK(text::to_lower_ascii("MiXeD 123") == "mixed 123");
    CHECK(text::trim("  x  ") == "x");
    CHECK(text::trim("") == "");
    CHECK(text::collapse_whitespace("a\t\tb\n c") == "a b c");
    CHECK(text::starts_with_icase("WWW.site", "www."));
    CHECK(!text::starts_with_icase("ww.site", "www."));
    CHECK(text::starts_with_icase("abc", ""));
}

TEST_CASE("utf8 round trip") {
    for (uint32_t cp : {0x24u, 0xA2u, 0x939u, 0x20ACu, 0x1F600u}) {
        std::string buf;
        text::append_utf8(buf, cp);
        size_t len = 0;
        CHECK(text::decode_utf8(buf, 0, &len) == cp);
        CHECK(len == buf.size());
    }
    // invalid byte decodes as itself and advances
    std::string bad = "\xFF";
    size_t len = 0;
    CHECK(text::decode_utf8(bad, 0, &len) == 0xFFu);
    CHECK(len == 1);
}

TEST_CASE("csv formatting is fixed precision") {
    CHECK(csv::format_double(0.0) == "0.000000");
    CHECK(csv::format_double(1.5) == "1.500000");
    CHECK(csv::format_double(2.0 / 3.0, 9) == "0.666666667");
    CHECK(csv::format_double(-0.25, 2) == "-0.25");
}

TEST_CASE("csv escaping and reading round trip") {
    CHECK(csv::escape_field("plain") == "plain");
    CHECK(csv::escape_field("a,b") == "\"a,b\"");
    CHECK(csv::escape_field("say \"hi\"") == "\"say \"\"hi\"\"\"");

    TempDir tmp;
    {
        csv::Writer w(tmp.file("t.csv"));
        w.write_row({"h1", "h2"});
        w.write_row({"a,b", "say \"hi\""});
        w.write_row({"", "x"});
    }
    auto rows = csv::read_file(tmp.file("t.csv"));
    REQUIRE(rows.size() == 3);
    CHECK(rows[1][0] == "a,b");
    CHECK(rows[1][1] == "say \"hi\"");
    CHECK(rows[2][0] == "");
}

TEST_CASE("jsonl reports the offending line") {
    TempDir tmp;
    testing_support::write_text(tmp.file("bad.jsonl"), "{\"ok\":1}\n{broken\n");
    int seen = 0;
    try {
        jsonl::for_each_record(tmp.file("bad.jsonl"), [&](const jsonl::json&) { ++seen; });
        FAIL("expected dataset_error");
    } catch (const dataset_error& e) {
        CHECK(std::string(e.what()).find(":2") != std::string::npos);
    }
    CHECK(seen == 1);
}

TEST_CASE("jsonl skips empty lines and converts callback json errors") {
    TempDir tmp;
    testing_support::write_text(tmp.file("r.jsonl"), "{\"a\":1}\n\n{\"a\":2}\n");
    std::vector<int> values;
    jsonl::for_each_record(tmp.file("r.jsonl"),
                           [&](const jsonl::json& j) { values.push_back(j.at("a").get<int>()); });
    CHECK(values == std::vector<int>{1, 2});

    // a missing key inside the callback surfaces as dataset_error with context
    CHECK_THROWS_AS(jsonl::for_each_record(
                        tmp.file("r.jsonl"),
                        [&](const jsonl::json& j) { (void)j.at("missing"); }),
                    dataset_error);
}

TEST_CASE("jsonl writer emits one line per record") {
    TempDir tmp;
    {
        jsonl::Writer w(tmp.file("w.jsonl"));
        w.write({{"k", 1}});
        w.write({{"k", 2}});
    }
    auto body = testing_support::read_text(tmp.file("w.jsonl"));
    CHECK(std::count(body.begin(), body.end(), '\n') == 2);
}

TEST_CASE("rng streams are deterministic and independent") {
    auto a1 = make_rng(7, 3);
    auto a2 = make_rng(7, 3);
    CHECK(a1() == a2());

    auto b = make_rng(7, 4);
    auto c = make_rng(8, 3);
    auto base = make_rng(7, 3);
    CHECK(base() != b());  // different stream
    auto base2 = make_rng(7, 3);
    CHECK(base2() != c());  // different seed
}

TEST_CASE("warning counter observes log_warn") {
    reset_warning_count();
    long before = warning_count();
    LogLevel prev = log_level();
    set_log_level(LogLevel::silent);
    log_warn("test", "observed");
    set_log_level(prev);
    CHECK(warning_count() == before + 1);
}
