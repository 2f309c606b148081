#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "anchoralign/embedding_store.hpp"
#include "anchoralign/error.hpp"
#include "synthetic.hpp"

using namespace anchoralign;

namespace {

std::vector<unsigned char> header(std::uint32_t version, std::uint32_t rows, std::uint32_t dim) {
    std::vector<unsigned char> out{'A', 'E', 'M', 'B'};
    for (std::uint32_t v : {version, rows, dim}) {
        for (int s = 0; s < 32; s += 8) {
            out.push_back(static_cast<unsigned char>(v >> s));
        }
    }
    return out;
}

void push_float(std::vector<unsigned char>& out, float f) {
    std::uint32_t bits;
    std::memcpy(&bits, &f, 4);
    for (int s = 0; s < 32; s += 8) {
        out.push_back(static_cast<unsigned char>(bits >> s));
    }
}

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an anchoralign::Error");
    return ErrorCode::Io;
}

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("anchoralign_test_" + name);
}

} // namespace

TEST_CASE("binary decode of a 2x3 matrix") {
    auto bytes = header(1, 2, 3);
    for (float f : {1.0f, 2.0f, 3.0f, 4.0f, 5.0f, 6.0f}) {
        push_float(bytes, f);
    }
    const EmbeddingMatrix m = decode_binary_matrix(bytes);
    CHECK(m.rows() == 2);
    CHECK(m.dim() == 3);
    CHECK_FALSE(m.normalized());
    CHECK(m.row(1)[0] == 4.0f);
    CHECK(m.row(1)[2] == 6.0f);
}

TEST_CASE("binary decode errors are distinct") {
    auto truncated = header(1, 2, 3);
    for (int i = 0; i < 5; ++i) {
        push_float(truncated, 1.0f);
    }
    CHECK(code_of([&] { decode_binary_matrix(truncated); }) == ErrorCode::TruncatedData);

    auto bad_magic = header(1, 1, 1);
    bad_magic[0] = 'X';
    push_float(bad_magic, 1.0f);
    CHECK(code_of([&] { decode_binary_matrix(bad_magic); }) == ErrorCode::MalformedHeader);

    auto bad_version = header(2, 1, 1);
    push_float(bad_version, 1.0f);
    CHECK(code_of([&] { decode_binary_matrix(bad_version); }) == ErrorCode::MalformedHeader);

    auto zero_dim = header(1, 1, 0);
    CHECK(code_of([&] { decode_binary_matrix(zero_dim); }) == ErrorCode::MalformedHeader);

    auto nan = header(1, 1, 2);
    push_float(nan, 1.0f);
    push_float(nan, std::nanf(""));
    CHECK(code_of([&] { decode_binary_matrix(nan); }) == ErrorCode::NonFinite);

    auto trailing = header(1, 1, 1);
    push_float(trailing, 1.0f);
    trailing.push_back(0);
    CHECK(code_of([&] { decode_binary_matrix(trailing); }) == ErrorCode::TrailingData);

    const std::vector<unsigned char> short_header{'A', 'E', 'M'};
    CHECK(code_of([&] { decode_binary_matrix(short_header); }) == ErrorCode::MalformedHeader);
}

TEST_CASE("zero-row binary matrix is valid") {
    const EmbeddingMatrix m = decode_binary_matrix(header(1, 0, 8));
    CHECK(m.rows() == 0);
    CHECK(m.dim() == 8);
}

TEST_CASE("tsv parsing") {
    const EmbeddingMatrix m = parse_tsv_matrix("1\t2\t3\n4\t5\t6\n");
    CHECK(m.rows() == 2);
    CHECK(m.dim() == 3);
    CHECK(m.row(0)[1] == 2.0f);

    CHECK(code_of([] { parse_tsv_matrix(""); }) == ErrorCode::EmptyMatrix);
    CHECK(code_of([] { parse_tsv_matrix("1\t2\n3\n"); }) == ErrorCode::RowLengthMismatch);
    CHECK(code_of([] { parse_tsv_matrix("1\tinf\n"); }) == ErrorCode::NonFinite);
    CHECK(code_of([] { parse_tsv_matrix("1\tabc\n"); }) == ErrorCode::ParseError);
}

TEST_CASE("binary round trip through a file is bit-exact") {
    testing::Rng rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        std::uniform_int_distribution<std::size_t> rows(0, 20);
        std::uniform_int_distribution<std::size_t> dim(1, 12);
        std::normal_distribution<float> g(0.0f, 3.0f);
        const std::size_t r = rows(rng);
        const std::size_t d = dim(rng);
        std::vector<float> data(r * d);
        for (auto& x : data) {
            x = g(rng);
        }
        const EmbeddingMatrix m(r, d, data);
        const auto path = temp_path("roundtrip.aemb");
        write_matrix(path.string(), m, MatrixFormat::Binary);
        const EmbeddingMatrix back = load_matrix(path.string(), MatrixFormat::Binary);
        REQUIRE(back.rows() == r);
        REQUIRE(back.dim() == d);
        CHECK(std::memcmp(back.data().data(), m.data().data(), data.size() * sizeof(float)) == 0);
        std::filesystem::remove(path);
    }
}

TEST_CASE("tsv files round trip") {
    const EmbeddingMatrix m(2, 2, {0.125f, -3.5f, 1e-3f, 7.0f});
    const auto path = temp_path("roundtrip.tsv");
    write_matrix(path.string(), m, MatrixFormat::Tsv);
    const EmbeddingMatrix back = load_matrix(path.string(), MatrixFormat::Tsv);
    CHECK(std::vector<float>(back.data().begin(), back.data().end()) ==
          std::vector<float>(m.data().begin(), m.data().end()));
    std::filesystem::remove(path);
}

TEST_CASE("missing file") {
    CHECK(code_of([] { load_matrix("/nonexistent/x.aemb", MatrixFormat::Binary); }) == ErrorCode::Io);
}

TEST_CASE("l2_normalize") {
    const EmbeddingMatrix m(2, 2, {3.0f, 4.0f, 1.0f, 0.0f});
    const EmbeddingMatrix n = l2_normalize(m);
    CHECK(n.normalized());
    CHECK(n.row(0)[0] == doctest::Approx(0.6));
    CHECK(n.row(0)[1] == doctest::Approx(0.8));
    CHECK(n.row(1)[0] == 1.0f);
    CHECK(n.row(1)[1] == 0.0f);

    const EmbeddingMatrix identity(1, 3, {1.0f, 0.0f, 0.0f});
    CHECK(l2_normalize(identity).row(0)[0] == 1.0f);

    const EmbeddingMatrix zero(1, 2, {0.0f, 0.0f});
    try {
        l2_normalize(zero);
        FAIL("expected ZeroRow");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ZeroRow);
        CHECK(e.index() == 0u);
    }
}

TEST_CASE("normalized rows have unit norm and normalization is idempotent") {
    testing::Rng rng(11);
    std::normal_distribution<float> g(0.0f, 5.0f);
    std::vector<float> data(30 * 7);
    for (auto& x : data) {
        x = g(rng);
    }
    const EmbeddingMatrix n = l2_normalize(EmbeddingMatrix(30, 7, data));
    for (std::size_t i = 0; i < n.rows(); ++i) {
        double sq = 0.0;
        for (float x : n.row(i)) {
            sq += static_cast<double>(x) * x;
        }
        CHECK(std::abs(std::sqrt(sq) - 1.0) < 1e-4);
        for (std::size_t j = 0; j < n.rows(); ++j) {
            double dot = 0.0;
            for (std::size_t k = 0; k < n.dim(); ++k) {
                dot += static_cast<double>(n.row(i)[k]) * n.row(j)[k];
            }
            CHECK(dot >= -1.0 - 1e-6);
            CHECK(dot <= 1.0 + 1e-6);
        }
    }
    const EmbeddingMatrix again = l2_normalize(n);
    CHECK(std::memcmp(again.data().data(), n.data().data(), data.size() * sizeof(float)) == 0);
}

TEST_CASE("sum_rows") {
    const EmbeddingMatrix m(2, 2, {1.0f, 0.0f, 0.0f, 1.0f});
    CHECK(sum_rows(m, {0, 2}) == std::vector<double>{1.0, 1.0});
    CHECK(sum_rows(m, {1, 2}) == std::vector<double>{0.0, 1.0});

    const EmbeddingMatrix same(2, 2, {0.6f, 0.8f, 0.6f, 0.8f});
    const auto s = sum_rows(same, {0, 2});
    CHECK(s[0] == doctest::Approx(1.2));
    CHECK(s[1] == doctest::Approx(1.6));

    CHECK_THROWS_AS(sum_rows(m, {0, 3}), Error);
    CHECK_THROWS_AS(sum_rows(m, {1, 1}), Error);
}

TEST_CASE("sum_rows is additive over adjacent ranges") {
    testing::Rng rng(3);
    std::normal_distribution<float> g(0.0f, 1.0f);
    std::vector<float> data(15 * 5);
    for (auto& x : data) {
        x = g(rng);
    }
    const EmbeddingMatrix m(15, 5, data);
    for (std::size_t a = 0; a < 15; ++a) {
        for (std::size_t b = a + 1; b < 15; ++b) {
            for (std::size_t c = b + 1; c <= 15; ++c) {
                const auto whole = sum_rows(m, {a, c});
                const auto left = sum_rows(m, {a, b});
                const auto right = sum_rows(m, {b, c});
                for (std::size_t k = 0; k < 5; ++k) {
                    CHECK(std::abs(whole[k] - (left[k] + right[k])) <=
                          1e-6 * std::max(1.0, std::abs(whole[k])));
                }
            }
        }
    }
}

TEST_CASE("character lengths count Unicode scalar values") {
    CHECK(utf8_length("abc") == 3);
    CHECK(utf8_length("\xc3\xa9t\xc3\xa9") == 3);               // été
    CHECK(utf8_length("\xe4\xb8\xad\xe6\x96\x87") == 2);        // 中文
    CHECK(utf8_length("\xd8\xb3\xd9\x84\xd8\xa7\xd9\x85") == 4); // سلام
    CHECK(utf8_length("\xf0\x9f\x98\x80") == 1);

    const SentenceDoc doc = parse_sentences("Bonjour.\r\n\xe4\xb8\xad\xe6\x96\x87\n\nlast");
    REQUIRE(doc.size() == 4);
    CHECK(doc.sentence(0) == "Bonjour.");
    CHECK(doc.char_length(1) == 2);
    CHECK(doc.char_length(2) == 0);
    CHECK(doc.total_chars() == 8 + 2 + 0 + 4);
    CHECK(doc.chars_in({0, 2}) == 10);
    CHECK(parse_sentences("a\nb\n").size() == 2);
    CHECK(parse_sentences("").size() == 0);
}
