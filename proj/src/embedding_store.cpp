#include "anchoralign/embedding_store.hpp"

#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "anchoralign/error.hpp"

namespace anchoralign {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot open " + path);
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t read_u32_le(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void write_u32_le(std::vector<unsigned char>& out, std::uint32_t v) {
    for (int shift = 0; shift < 32; shift += 8) {
        out.push_back(static_cast<unsigned char>((v >> shift) & 0xffu));
    }
}

constexpr std::size_t kHeaderBytes = 16;

} // namespace

MatrixFormat parse_matrix_format(const std::string& name) {
    if (name == "binary" || name == "aemb") {
        return MatrixFormat::Binary;
    }
    if (name == "tsv") {
        return MatrixFormat::Tsv;
    }
    throw Error(ErrorCode::Config, "unknown matrix format '" + name + "'");
}

EmbeddingMatrix::EmbeddingMatrix(std::size_t rows, std::size_t dim, std::vector<float> data,
                                 bool normalized)
    : rows_(rows), dim_(dim), data_(std::move(data)), normalized_(normalized) {
    if (dim_ == 0) {
        throw Error(ErrorCode::MalformedHeader, "embedding dimension must be at least 1");
    }
    if (data_.size() != rows_ * dim_) {
        throw Error(ErrorCode::TruncatedData,
                    "expected " + std::to_string(rows_ * dim_) + " values, got " +
                        std::to_string(data_.size()));
    }
}

std::span<const float> EmbeddingMatrix::row(std::size_t i) const {
    if (i >= rows_) {
        throw Error(ErrorCode::OutOfRange, "row index out of range", i);
    }
    return std::span<const float>(data_).subspan(i * dim_, dim_);
}

EmbeddingMatrix decode_binary_matrix(std::span<const unsigned char> bytes) {
    if (bytes.size() < kHeaderBytes || std::memcmp(bytes.data(), kMatrixMagic, 4) != 0) {
        throw Error(ErrorCode::MalformedHeader, "missing AEMB header");
    }
    const std::uint32_t version = read_u32_le(bytes.data() + 4);
    const std::uint32_t rows = read_u32_le(bytes.data() + 8);
    const std::uint32_t dim = read_u32_le(bytes.data() + 12);
    if (version != kMatrixVersion) {
        throw Error(ErrorCode::MalformedHeader, "unsupported version " + std::to_string(version));
    }
    if (dim == 0) {
        throw Error(ErrorCode::MalformedHeader, "dim must be at least 1");
    }
    const std::size_t count = static_cast<std::size_t>(rows) * dim;
    const std::size_t payload = bytes.size() - kHeaderBytes;
    if (payload < count * 4) {
        throw Error(ErrorCode::TruncatedData, "declared " + std::to_string(count) +
                                                  " floats, found " + std::to_string(payload / 4));
    }
    if (payload > count * 4) {
        throw Error(ErrorCode::TrailingData, "unexpected bytes after matrix payload");
    }

    std::vector<float> data(count);
    const unsigned char* p = bytes.data() + kHeaderBytes;
    for (std::size_t i = 0; i < count; ++i, p += 4) {
        const std::uint32_t bits = read_u32_le(p);
        float v;
        std::memcpy(&v, &bits, sizeof v);
        if (!std::isfinite(v)) {
            throw Error(ErrorCode::NonFinite, "non-finite value in row " + std::to_string(i / dim),
                        i / dim);
        }
        data[i] = v;
    }
    return EmbeddingMatrix(rows, dim, std::move(data));
}

EmbeddingMatrix parse_tsv_matrix(const std::string& text) {
    std::vector<float> data;
    std::size_t dim = 0;
    std::size_t rows = 0;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        std::size_t fields = 0;
        std::size_t pos = 0;
        while (pos <= line.size()) {
            std::size_t tab = line.find('\t', pos);
            if (tab == std::string::npos) {
                tab = line.size();
            }
            float v = 0.0f;
            const char* first = line.data() + pos;
            const char* last = line.data() + tab;
            auto [ptr, ec] = std::from_chars(first, last, v);
            if (ec != std::errc() || ptr != last) {
                throw Error(ErrorCode::ParseError, "bad float on line " + std::to_string(line_no),
                            line_no);
            }
            if (!std::isfinite(v)) {
                throw Error(ErrorCode::NonFinite, "non-finite value on line " + std::to_string(line_no),
                            line_no);
            }
            data.push_back(v);
            ++fields;
            pos = tab + 1;
        }
        if (dim == 0) {
            dim = fields;
        } else if (fields != dim) {
            throw Error(ErrorCode::RowLengthMismatch,
                        "line " + std::to_string(line_no) + " has " + std::to_string(fields) +
                            " values, expected " + std::to_string(dim),
                        line_no);
        }
        ++rows;
    }
    if (rows == 0) {
        throw Error(ErrorCode::EmptyMatrix, "tsv matrix has no rows; dimension cannot be inferred");
    }
    return EmbeddingMatrix(rows, dim, std::move(data));
}

EmbeddingMatrix load_matrix(const std::string& path, MatrixFormat format) {
    const std::string raw = read_file(path);
    if (format == MatrixFormat::Tsv) {
        return parse_tsv_matrix(raw);
    }
    return decode_binary_matrix(
        std::span<const unsigned char>(reinterpret_cast<const unsigned char*>(raw.data()), raw.size()));
}

std::vector<unsigned char> encode_binary_matrix(const EmbeddingMatrix& m) {
    std::vector<unsigned char> out;
    out.reserve(kHeaderBytes + m.data().size() * 4);
    out.insert(out.end(), std::begin(kMatrixMagic), std::end(kMatrixMagic));
    write_u32_le(out, kMatrixVersion);
    write_u32_le(out, static_cast<std::uint32_t>(m.rows()));
    write_u32_le(out, static_cast<std::uint32_t>(m.dim()));
    for (float v : m.data()) {
        std::uint32_t bits;
        std::memcpy(&bits, &v, sizeof bits);
        write_u32_le(out, bits);
    }
    return out;
}

void write_matrix(const std::string& path, const EmbeddingMatrix& m, MatrixFormat format) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorCode::Io, "cannot write " + path);
    }
    if (format == MatrixFormat::Binary) {
        const auto bytes = encode_binary_matrix(m);
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
    } else {
        char buf[32];
        for (std::size_t i = 0; i < m.rows(); ++i) {
            const auto r = m.row(i);
            for (std::size_t k = 0; k < r.size(); ++k) {
                auto [end, ec] = std::to_chars(buf, buf + sizeof buf, r[k]);
                if (k) {
                    out.put('\t');
                }
                out.write(buf, end - buf);
            }
            out.put('\n');
        }
    }
    if (!out) {
        throw Error(ErrorCode::Io, "write failed for " + path);
    }
}

EmbeddingMatrix l2_normalize(const EmbeddingMatrix& m) {
    if (m.normalized()) {
        return m;
    }
    std::vector<float> data(m.data().begin(), m.data().end());
    const std::size_t dim = m.dim();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double sq = 0.0;
        for (std::size_t k = 0; k < dim; ++k) {
            sq += static_cast<double>(data[i * dim + k]) * data[i * dim + k];
        }
        const double norm = std::sqrt(sq);
        if (norm < 1e-12) {
            throw Error(ErrorCode::ZeroRow, "cannot normalize a zero vector", i);
        }
        for (std::size_t k = 0; k < dim; ++k) {
            data[i * dim + k] = static_cast<float>(data[i * dim + k] / norm);
        }
    }
    return EmbeddingMatrix(m.rows(), dim, std::move(data), true);
}

std::vector<double> sum_rows(const EmbeddingMatrix& m, IndexRange range) {
    if (range.empty() || range.begin > range.end || range.end > m.rows()) {
        throw Error(ErrorCode::OutOfRange,
                    "row range [" + std::to_string(range.begin) + ", " + std::to_string(range.end) +
                        ") invalid for " + std::to_string(m.rows()) + " rows");
    }
    std::vector<double> out(m.dim(), 0.0);
    for (std::size_t i = range.begin; i < range.end; ++i) {
        const auto r = m.row(i);
        for (std::size_t k = 0; k < r.size(); ++k) {
            out[k] += r[k];
        }
    }
    return out;
}

std::size_t utf8_length(std::string_view text) {
    std::size_t n = 0;
    for (unsigned char ch : text) {
        if ((ch & 0xC0u) != 0x80u) {
            ++n;
        }
    }
    return n;
}

SentenceDoc::SentenceDoc(std::vector<std::string> sentences) : sentences_(std::move(sentences)) {
    char_lengths_.reserve(sentences_.size());
    prefix_chars_.reserve(sentences_.size() + 1);
    for (const auto& s : sentences_) {
        char_lengths_.push_back(utf8_length(s));
        total_chars_ += char_lengths_.back();
        prefix_chars_.push_back(total_chars_);
    }
}

std::size_t SentenceDoc::chars_in(IndexRange range) const {
    if (range.begin > range.end || range.end > sentences_.size()) {
        throw Error(ErrorCode::OutOfRange, "sentence range out of bounds");
    }
    return prefix_chars_[range.end] - prefix_chars_[range.begin];
}

SentenceDoc parse_sentences(const std::string& text) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string::npos) {
            nl = text.size();
        }
        std::string line = text.substr(pos, nl - pos);
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        out.push_back(std::move(line));
        pos = nl + 1;
    }
    return SentenceDoc(std::move(out));
}

SentenceDoc load_sentences(const std::string& path) {
    return parse_sentences(read_file(path));
}

} // namespace anchoralign
