#include "anchoralign/bead_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include "anchoralign/error.hpp"

namespace anchoralign {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) {
        ++b;
    }
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) {
        --e;
    }
    return s.substr(b, e - b);
}

std::vector<std::size_t> parse_index_list(const std::string& field, std::size_t line_no) {
    std::vector<std::size_t> out;
    const std::string body = trim(field);
    if (body.empty()) {
        return out;
    }
    std::size_t pos = 0;
    while (pos <= body.size()) {
        std::size_t comma = body.find(',', pos);
        if (comma == std::string::npos) {
            comma = body.size();
        }
        const std::string token = trim(body.substr(pos, comma - pos));
        std::size_t value = 0;
        auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
        if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
            throw Error(ErrorCode::ParseError, "bad sentence index '" + token + "'", line_no);
        }
        out.push_back(value);
        pos = comma + 1;
    }
    std::sort(out.begin(), out.end());
    if (std::adjacent_find(out.begin(), out.end()) != out.end()) {
        throw Error(ErrorCode::ParseError, "repeated sentence index in a bead", line_no);
    }
    return out;
}

std::string bracket_body(const std::string& s, std::size_t line_no) {
    const std::string t = trim(s);
    if (t.size() < 2 || t.front() != '[' || t.back() != ']') {
        throw Error(ErrorCode::ParseError, "expected a bracketed index list", line_no);
    }
    return t.substr(1, t.size() - 2);
}

void join_indices(std::ostream& out, IndexRange range, const char* sep) {
    for (std::size_t i = range.begin; i < range.end; ++i) {
        if (i != range.begin) {
            out << sep;
        }
        out << i;
    }
}

void join_text(std::ostream& out, IndexRange range, const SentenceDoc* doc) {
    for (std::size_t i = range.begin; i < range.end; ++i) {
        if (i != range.begin) {
            out << ' ';
        }
        out << doc->sentence(i);
    }
}

} // namespace

BeadFormat parse_bead_format(const std::string& name) {
    if (name == "tsv") {
        return BeadFormat::Tsv;
    }
    if (name == "bertalign") {
        return BeadFormat::Bertalign;
    }
    if (name == "text") {
        return BeadFormat::Text;
    }
    throw Error(ErrorCode::Config, "unknown alignment format '" + name + "'");
}

const char* bead_format_name(BeadFormat format) {
    switch (format) {
    case BeadFormat::Tsv: return "tsv";
    case BeadFormat::Bertalign: return "bertalign";
    case BeadFormat::Text: return "text";
    }
    return "tsv";
}

BeadKey bead_key(const Bead& bead) {
    BeadKey key;
    for (std::size_t i = bead.src.begin; i < bead.src.end; ++i) {
        key.src.push_back(i);
    }
    for (std::size_t j = bead.tgt.begin; j < bead.tgt.end; ++j) {
        key.tgt.push_back(j);
    }
    return key;
}

BeadKey parse_bead_line(const std::string& raw, BeadFormat format, std::size_t line_no) {
    std::string line = raw;
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    BeadKey key;
    if (format == BeadFormat::Tsv) {
        const std::size_t tab = line.find('\t');
        if (tab == std::string::npos) {
            throw Error(ErrorCode::ParseError, "expected source<TAB>target", line_no);
        }
        std::size_t tab2 = line.find('\t', tab + 1);
        if (tab2 == std::string::npos) {
            tab2 = line.size();
        }
        key.src = parse_index_list(line.substr(0, tab), line_no);
        key.tgt = parse_index_list(line.substr(tab + 1, tab2 - tab - 1), line_no);
    } else if (format == BeadFormat::Bertalign) {
        const std::size_t colon = line.find(':');
        if (colon == std::string::npos) {
            throw Error(ErrorCode::ParseError, "expected [src]:[tgt]", line_no);
        }
        key.src = parse_index_list(bracket_body(line.substr(0, colon), line_no), line_no);
        key.tgt = parse_index_list(bracket_body(line.substr(colon + 1), line_no), line_no);
    } else {
        throw Error(ErrorCode::ParseError, "text alignments cannot be read back", line_no);
    }
    if (key.src.empty() && key.tgt.empty()) {
        throw Error(ErrorCode::ParseError, "bead with two empty sides", line_no);
    }
    return key;
}

std::vector<BeadKey> parse_beads(const std::string& text, BeadFormat format) {
    std::vector<BeadKey> out;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        out.push_back(parse_bead_line(line, format, line_no));
    }
    return out;
}

std::vector<BeadKey> load_beads(const std::string& path, BeadFormat format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot open " + path);
    }
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return parse_beads(text, format);
}

void write_bead(std::ostream& out, const Bead& bead, const BeadWriteOptions& options,
                const SentenceDoc* src, const SentenceDoc* tgt) {
    switch (options.format) {
    case BeadFormat::Tsv: {
        join_indices(out, bead.src, ",");
        out << '\t';
        join_indices(out, bead.tgt, ",");
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6f", bead.cost);
        out << '\t' << buf << '\n';
        break;
    }
    case BeadFormat::Bertalign:
        out << '[';
        join_indices(out, bead.src, ", ");
        out << "]:[";
        join_indices(out, bead.tgt, ", ");
        out << "]\n";
        break;
    case BeadFormat::Text:
        if (src == nullptr || tgt == nullptr) {
            throw Error(ErrorCode::Config, "text output needs both sentence documents");
        }
        join_text(out, bead.src, src);
        out << options.text_delimiter;
        join_text(out, bead.tgt, tgt);
        out << '\n';
        break;
    }
}

} // namespace anchoralign
