#ifndef ANCHORALIGN_EMBEDDING_STORE_HPP
#define ANCHORALIGN_EMBEDDING_STORE_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace anchoralign {

enum class MatrixFormat { Binary, Tsv };

MatrixFormat parse_matrix_format(const std::string& name);

// Half-open range [begin, end) of sentence indices.
struct IndexRange {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const noexcept { return end - begin; }
    bool empty() const noexcept { return begin == end; }
    bool operator==(const IndexRange&) const = default;
};

// Dense row-per-sentence vector store for one document side. Values are kept
// as 32-bit floats so the binary format round-trips bit-exactly.
class EmbeddingMatrix {
public:
    EmbeddingMatrix() = default;
    EmbeddingMatrix(std::size_t rows, std::size_t dim, std::vector<float> data,
                    bool normalized = false);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t dim() const noexcept { return dim_; }
    bool normalized() const noexcept { return normalized_; }

    std::span<const float> row(std::size_t i) const;
    std::span<const float> data() const noexcept { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t dim_ = 0;
    std::vector<float> data_;
    bool normalized_ = false;
};

// Binary ".aemb" layout: "AEMB", u32 version (1), u32 rows, u32 dim, then
// rows*dim float32 values, all little-endian, row-major.
inline constexpr char kMatrixMagic[4] = {'A', 'E', 'M', 'B'};
inline constexpr std::uint32_t kMatrixVersion = 1;

EmbeddingMatrix load_matrix(const std::string& path, MatrixFormat format);
EmbeddingMatrix decode_binary_matrix(std::span<const unsigned char> bytes);
EmbeddingMatrix parse_tsv_matrix(const std::string& text);

void write_matrix(const std::string& path, const EmbeddingMatrix& m, MatrixFormat format);
std::vector<unsigned char> encode_binary_matrix(const EmbeddingMatrix& m);

// Scales every row to unit Euclidean norm. Throws ZeroRow(i) when a row has
// norm below 1e-12. Already-normalized input is returned unchanged.
EmbeddingMatrix l2_normalize(const EmbeddingMatrix& m);

// Component-wise sum of rows in `range`. Not re-normalized.
std::vector<double> sum_rows(const EmbeddingMatrix& m, IndexRange range);

// Number of Unicode scalar values in a UTF-8 string.
std::size_t utf8_length(std::string_view text);

class SentenceDoc {
public:
    SentenceDoc() = default;
    explicit SentenceDoc(std::vector<std::string> sentences);

    std::size_t size() const noexcept { return sentences_.size(); }
    const std::string& sentence(std::size_t i) const { return sentences_.at(i); }
    const std::vector<std::string>& sentences() const noexcept { return sentences_; }
    std::size_t char_length(std::size_t i) const { return char_lengths_.at(i); }
    const std::vector<std::size_t>& char_lengths() const noexcept { return char_lengths_; }
    std::size_t total_chars() const noexcept { return total_chars_; }

    // Characters in [range.begin, range.end).
    std::size_t chars_in(IndexRange range) const;

private:
    std::vector<std::string> sentences_;
    std::vector<std::size_t> char_lengths_;
    std::vector<std::size_t> prefix_chars_{0};
    std::size_t total_chars_ = 0;
};

// One sentence per line, UTF-8. A trailing '\r' is stripped; a final newline
// does not produce an extra empty sentence.
SentenceDoc load_sentences(const std::string& path);
SentenceDoc parse_sentences(const std::string& text);

} // namespace anchoralign

#endif
