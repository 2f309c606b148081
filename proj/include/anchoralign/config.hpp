#ifndef ANCHORALIGN_CONFIG_HPP
#define ANCHORALIGN_CONFIG_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "anchoralign/anchoring.hpp"
#include "anchoralign/bead_io.hpp"
#include "anchoralign/cost_model.hpp"
#include "anchoralign/intervals.hpp"

namespace anchoralign {

struct AlignConfig {
    AnchorParams anchor;
    IntervalParams intervals;
    CostParams cost;
    // computed from the documents when absent
    std::optional<double> sent_ratio;
    std::optional<double> char_ratio;
    unsigned threads = 1;
    BeadFormat format = BeadFormat::Tsv;
    std::string text_delimiter = "\t";

    void validate() const;
};

// One entry per configurable field; `name` is the kebab-case key used in
// config files and as the long command-line flag.
struct ConfigField {
    std::string name;
    std::string help;
    bool is_flag = false;
    std::function<void(AlignConfig&, const std::string&)> set;
    std::function<std::string(const AlignConfig&)> get;
};

const std::vector<ConfigField>& config_fields();

// Throws Config on unknown keys or unparsable values.
void set_config_value(AlignConfig& config, const std::string& key, const std::string& value);

// key=value lines; blank lines and lines starting with '#' are ignored.
void apply_config_text(AlignConfig& config, const std::string& text);
void apply_config_file(AlignConfig& config, const std::string& path);

// Every field as key=value, in config_fields() order. Feeding the output
// back through apply_config_text reproduces `config`.
std::string print_config(const AlignConfig& config);

} // namespace anchoralign

#endif
