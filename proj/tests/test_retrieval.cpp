#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <string>
#include <vector>

#include "gabrad/retrieval.hpp"

using namespace gabrad;

namespace {

BitVec random_code(std::size_t bits, std::mt19937_64& rng) {
    BitVec v(bits);
    for (std::size_t i = 0; i < bits; ++i) v.set(i, rng() & 1);
    return v;
}

std::size_t naive_hamming(const BitVec& a, const BitVec& b) {
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a.get(i) != b.get(i)) ++d;
    return d;
}

} // namespace

TEST_CASE("hamming basics") {
    std::mt19937_64 rng(1);
    BitVec a = random_code(768, rng);
    CHECK(hamming(a, a) == 0);

    BitVec complement(768);
    for (std::size_t i = 0; i < 768; ++i) complement.set(i, !a.get(i));
    CHECK(hamming(a, complement) == 768);

    // 10110010 vs 00110110 differ at two positions
    BitVec x(8), y(8);
    const char* xs = "10110010";
    const char* ys = "00110110";
    for (std::size_t i = 0; i < 8; ++i) {
        x.set(i, xs[i] == '1');
        y.set(i, ys[i] == '1');
    }
    CHECK(hamming(x, y) == 2);

    BitVec wrong(7);
    CHECK_THROWS_MATCHES(hamming(x, wrong), Error, Catch::Matchers::Predicate<Error>(
        [](const Error& e) { return e.code() == Errc::length_mismatch; }));
}

TEST_CASE("hamming satisfies the metric axioms on random triples") {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 10000; ++t) {
        std::size_t bits = 1 + rng() % 96;
        BitVec a = random_code(bits, rng), b = random_code(bits, rng), c = random_code(bits, rng);
        std::size_t ab = hamming(a, b), ba = hamming(b, a);
        std::size_t bc = hamming(b, c), ac = hamming(a, c);
        REQUIRE(ab == ba);                       // symmetry
        REQUIRE((ab == 0) == (a == b));          // identity of indiscernibles
        REQUIRE(ac <= ab + bc);                  // triangle inequality
    }
}

TEST_CASE("packed popcount equals the naive bit loop") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 1000; ++t) {
        std::size_t bits = 1 + rng() % 300;
        BitVec a = random_code(bits, rng), b = random_code(bits, rng);
        REQUIRE(hamming(a, b) == naive_hamming(a, b));
    }
}

TEST_CASE("bit vector byte round trip is lsb-first") {
    BitVec v(12);
    v.set(0, true);
    v.set(3, true);
    v.set(9, true);
    auto bytes = v.to_bytes();
    REQUIRE(bytes.size() == 2);
    CHECK(bytes[0] == 0b00001001);
    CHECK(bytes[1] == 0b00000010);
    CHECK(BitVec::from_bytes(12, bytes) == v);
}

TEST_CASE("empty index and simple partitioning") {
    ClassIndex empty = build_index({}, 99);
    CHECK(empty.buckets().empty());
    CHECK(empty.size() == 0);

    std::mt19937_64 rng(4);
    std::vector<IndexInput> recs{
        {"i1", "classA", random_code(64, rng)},
        {"i2", "classB", random_code(64, rng)},
        {"i3", "classA", random_code(64, rng)},
    };
    ClassIndex idx = build_index(recs, 5);
    CHECK(idx.size() == 3);
    CHECK(idx.buckets().at("classA").size() == 2);
    CHECK(idx.buckets().at("classB").size() == 1);
    CHECK(idx.fingerprint() == 5);
    // bucket preserves manifest order
    CHECK(idx.buckets().at("classA")[0].id == "i1");
    CHECK(idx.buckets().at("classA")[1].id == "i3");
}

TEST_CASE("duplicate ids and ragged code lengths are rejected") {
    std::mt19937_64 rng(5);
    std::vector<IndexInput> dup{
        {"x", "a", random_code(16, rng)},
        {"x", "b", random_code(16, rng)},
    };
    CHECK_THROWS_MATCHES(build_index(dup, 0), Error, Catch::Matchers::Predicate<Error>(
        [](const Error& e) { return e.code() == Errc::duplicate_id; }));

    std::vector<IndexInput> ragged{
        {"x", "a", random_code(16, rng)},
        {"y", "a", random_code(17, rng)},
    };
    CHECK_THROWS_MATCHES(build_index(ragged, 0), Error, Catch::Matchers::Predicate<Error>(
        [](const Error& e) { return e.code() == Errc::length_mismatch; }));
}

TEST_CASE("query errors: unknown class and length mismatch") {
    std::mt19937_64 rng(6);
    ClassIndex idx = build_index({{"a", "cls", random_code(32, rng)}}, 0);
    CHECK_THROWS_MATCHES(idx.query("other", random_code(32, rng), 1), Error,
        Catch::Matchers::Predicate<Error>(
            [](const Error& e) { return e.code() == Errc::unknown_class; }));
    CHECK_THROWS_MATCHES(idx.query("cls", random_code(31, rng), 1), Error,
        Catch::Matchers::Predicate<Error>(
            [](const Error& e) { return e.code() == Errc::length_mismatch; }));
}

TEST_CASE("self-retrieval returns the record itself at distance zero") {
    std::mt19937_64 rng(7);
    std::vector<IndexInput> recs;
    for (int i = 0; i < 40; ++i)
        recs.push_back({"id" + std::to_string(i), "c" + std::to_string(i % 3),
                        random_code(128, rng)});
    ClassIndex idx = build_index(recs, 0);
    for (const auto& rec : recs) {
        auto hits = idx.query(rec.label, rec.code, 1);
        REQUIRE(hits.size() == 1);
        CHECK(hits[0].id == rec.id);
        CHECK(hits[0].distance == 0);
    }
}

TEST_CASE("singleton bucket answers regardless of distance") {
    std::mt19937_64 rng(8);
    BitVec stored = random_code(64, rng);
    ClassIndex idx = build_index({{"only", "c", stored}}, 0);
    BitVec probe(64);
    for (std::size_t i = 0; i < 64; ++i) probe.set(i, !stored.get(i));
    auto hits = idx.query("c", probe, 3);
    REQUIRE(hits.size() == 1);
    CHECK(hits[0].id == "only");
    CHECK(hits[0].distance == 64);
}

TEST_CASE("query matches an exhaustive scan oracle, ties by bucket position") {
    std::mt19937_64 rng(9);
    // short codes force distance ties; the oracle resolves by position
    std::vector<IndexInput> recs;
    for (int i = 0; i < 100; ++i)
        recs.push_back({"id" + std::to_string(i), "bucket", random_code(24, rng)});
    ClassIndex idx = build_index(recs, 0);

    for (int probe_i = 0; probe_i < 20; ++probe_i) {
        BitVec probe = random_code(24, rng);
        auto hits = idx.query("bucket", probe, 5);
        REQUIRE(hits.size() == 5);

        std::vector<std::pair<std::size_t, std::size_t>> oracle;
        for (std::size_t pos = 0; pos < recs.size(); ++pos)
            oracle.emplace_back(naive_hamming(recs[pos].code, probe), pos);
        std::stable_sort(oracle.begin(), oracle.end(),
                         [](auto& a, auto& b) { return a.first < b.first; });
        for (std::size_t r = 0; r < 5; ++r) {
            CHECK(hits[r].id == recs[oracle[r].second].id);
            CHECK(hits[r].distance == oracle[r].first);
        }
        // non-decreasing distances
        for (std::size_t r = 1; r < hits.size(); ++r)
            CHECK(hits[r - 1].distance <= hits[r].distance);
    }
}

TEST_CASE("query scans exactly the predicted bucket") {
    std::mt19937_64 rng(10);
    std::vector<IndexInput> recs;
    for (int i = 0; i < 30; ++i)
        recs.push_back({"a" + std::to_string(i), "small", random_code(64, rng)});
    for (int i = 0; i < 70; ++i)
        recs.push_back({"b" + std::to_string(i), "large", random_code(64, rng)});
    ClassIndex idx = build_index(recs, 0);

    QueryStats stats;
    idx.query("small", random_code(64, rng), 3, &stats);
    CHECK(stats.scanned == 30);
    idx.query("large", random_code(64, rng), 3, &stats);
    CHECK(stats.scanned == 70);
}

TEST_CASE("k larger than the bucket returns the whole bucket") {
    std::mt19937_64 rng(11);
    std::vector<IndexInput> recs;
    for (int i = 0; i < 4; ++i)
        recs.push_back({"id" + std::to_string(i), "c", random_code(32, rng)});
    ClassIndex idx = build_index(recs, 0);
    auto hits = idx.query("c", random_code(32, rng), 10);
    CHECK(hits.size() == 4);
}
