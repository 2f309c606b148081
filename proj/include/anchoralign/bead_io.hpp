#ifndef ANCHORALIGN_BEAD_IO_HPP
#define ANCHORALIGN_BEAD_IO_HPP

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "anchoralign/dp_aligner.hpp"
#include "anchoralign/embedding_store.hpp"

namespace anchoralign {

enum class BeadFormat { Tsv, Bertalign, Text };

BeadFormat parse_bead_format(const std::string& name);
const char* bead_format_name(BeadFormat format);

// A bead as two sorted index sets. Contiguity is not required.
struct BeadKey {
    std::vector<std::size_t> src;
    std::vector<std::size_t> tgt;

    bool is_null() const noexcept { return src.empty() || tgt.empty(); }
    auto operator<=>(const BeadKey&) const = default;
};

BeadKey bead_key(const Bead& bead);

// tsv:       "0,1<TAB>2<TAB>0.123456" (cost column optional on input)
// bertalign: "[0, 1]:[2]"
BeadKey parse_bead_line(const std::string& line, BeadFormat format, std::size_t line_no);
std::vector<BeadKey> parse_beads(const std::string& text, BeadFormat format);
std::vector<BeadKey> load_beads(const std::string& path, BeadFormat format);

struct BeadWriteOptions {
    BeadFormat format = BeadFormat::Tsv;
    // separates the source and target text in BeadFormat::Text
    std::string text_delimiter = "\t";
};

void write_bead(std::ostream& out, const Bead& bead, const BeadWriteOptions& options,
                const SentenceDoc* src = nullptr, const SentenceDoc* tgt = nullptr);

} // namespace anchoralign

#endif
