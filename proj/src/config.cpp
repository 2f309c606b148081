#include "anchoralign/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include "anchoralign/error.hpp"

namespace anchoralign {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& value) {
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (value.empty() || ec != std::errc() || ptr != value.data() + value.size()) {
        throw Error(ErrorCode::Config, "'" + value + "' is not a number for " + key);
    }
    return out;
}

std::size_t to_size(const std::string& key, const std::string& value) {
    std::size_t out = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (value.empty() || ec != std::errc() || ptr != value.data() + value.size()) {
        throw Error(ErrorCode::Config, "'" + value + "' is not a non-negative integer for " + key);
    }
    return out;
}

bool to_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes" || value == "on") {
        return true;
    }
    if (value == "false" || value == "0" || value == "no" || value == "off") {
        return false;
    }
    throw Error(ErrorCode::Config, "'" + value + "' is not a boolean for " + key);
}

std::string from_double(double v) {
    // shortest round-trip representation
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

std::string from_bool(bool v) {
    return v ? "true" : "false";
}

template <class Access>
ConfigField real_field(std::string name, std::string help, Access access) {
    return {std::move(name), std::move(help), false,
            [access, n = name](AlignConfig& c, const std::string& v) { access(c) = to_double(n, v); },
            [access](const AlignConfig& c) { return from_double(access(c)); }};
}

template <class Access>
ConfigField size_field(std::string name, std::string help, Access access) {
    return {std::move(name), std::move(help), false,
            [access, n = name](AlignConfig& c, const std::string& v) { access(c) = to_size(n, v); },
            [access](const AlignConfig& c) {
                return std::to_string(access(c));
            }};
}

template <class Access>
ConfigField bool_field(std::string name, std::string help, Access access) {
    return {std::move(name), std::move(help), true,
            [access, n = name](AlignConfig& c, const std::string& v) { access(c) = to_bool(n, v); },
            [access](const AlignConfig& c) { return from_bool(access(c)); }};
}

template <class Access>
ConfigField ratio_field(std::string name, std::string help, Access access) {
    return {std::move(name), std::move(help), false,
            [access, n = name](AlignConfig& c, const std::string& v) {
                if (v == "auto") {
                    access(c).reset();
                } else {
                    access(c) = to_double(n, v);
                }
            },
            [access](const AlignConfig& c) {
                const auto& r = access(c);
                return r ? from_double(*r) : std::string("auto");
            }};
}

std::vector<ConfigField> build_fields() {
    std::vector<ConfigField> f;
    f.push_back(size_field("k", "k-best width for anchor candidates",
                           [](auto& c) -> auto& { return c.anchor.k; }));
    f.push_back(real_field("margin-threshold", "minimum gap between the two best candidates",
                           [](auto& c) -> auto& { return c.anchor.margin_threshold; }));
    f.push_back(real_field("cos-threshold", "candidates need a cosine above this",
                           [](auto& c) -> auto& { return c.anchor.cos_threshold; }));
    f.push_back(real_field("delta-x", "density zone length (source sentences)",
                           [](auto& c) -> auto& { return c.anchor.delta_x; }));
    f.push_back(real_field("delta-y", "density zone height (target sentences)",
                           [](auto& c) -> auto& { return c.anchor.delta_y; }));
    f.push_back(real_field("min-density-ratio", "minimum local/average candidate density",
                           [](auto& c) -> auto& { return c.anchor.min_density_ratio; }));
    f.push_back(real_field("deviation-ignore-threshold",
                           "low-density anchors deviating more than this are ignored",
                           [](auto& c) -> auto& { return c.intervals.deviation_ignore_threshold; }));
    f.push_back(real_field("max-dist-to-the-diagonal", "deviation limit for joining the current interval",
                           [](auto& c) -> auto& { return c.intervals.max_dist_to_the_diagonal; }));
    f.push_back(real_field("max-gap-size", "distance that lets an isolated anchor open an interval",
                           [](auto& c) -> auto& { return c.intervals.max_gap_size; }));
    f.push_back(real_field("min-horizontal-density", "minimum anchors per source sentence in an interval",
                           [](auto& c) -> auto& { return c.intervals.min_horizontal_density; }));
    f.push_back(bool_field("detect-intervals", "split the documents into alignable intervals",
                           [](auto& c) -> auto& { return c.intervals.detect; }));
    f.push_back(bool_field("adaptive", "re-estimate ratios from intervals and rerun (implies detection)",
                           [](auto& c) -> auto& { return c.intervals.adaptive; }));
    f.push_back(real_field("neighbour-coef", "weight c of the neighbour similarity term",
                           [](auto& c) -> auto& { return c.cost.neighbour_coef; }));
    f.push_back(real_field("size-penalty", "penalty p per sentence in a bead",
                           [](auto& c) -> auto& { return c.cost.size_penalty; }));
    f.push_back(real_field("length-weight", "weight w of the length distance",
                           [](auto& c) -> auto& { return c.cost.length_weight; }));
    f.push_back(real_field("length-slope", "coefficient on the log2 term of the length distance",
                           [](auto& c) -> auto& { return c.cost.length_slope; }));
    f.push_back(size_field("max-group-size", "largest n in 1-n and n-1 beads",
                           [](auto& c) -> auto& { return c.cost.max_group_size; }));
    f.push_back(bool_field("allow22", "permit 2-2 beads",
                           [](auto& c) -> auto& { return c.cost.allow_2_2; }));
    f.push_back(bool_field("allow-empty", "permit 1-0 and 0-1 beads",
                           [](auto& c) -> auto& { return c.cost.allow_empty; }));
    f.push_back(real_field("empty-bead-cost", "distance of a 1-0 or 0-1 bead",
                           [](auto& c) -> auto& { return c.cost.empty_bead_cost; }));
    f.push_back(real_field("local-diag-beam", "anchors further than this from the local diagonal are skipped",
                           [](auto& c) -> auto& { return c.cost.local_diag_beam; }));
    f.push_back(ratio_field("char-ratio", "target/source character ratio, or auto",
                            [](auto& c) -> auto& { return c.char_ratio; }));
    f.push_back(ratio_field("sent-ratio", "target/source sentence ratio, or auto",
                            [](auto& c) -> auto& { return c.sent_ratio; }));
    f.push_back(size_field("threads", "worker cap for similarity rows and intervals",
                           [](auto& c) -> auto& { return c.threads; }));
    f.push_back({"format", "output format: tsv, bertalign or text", false,
                 [](AlignConfig& c, const std::string& v) { c.format = parse_bead_format(v); },
                 [](const AlignConfig& c) { return std::string(bead_format_name(c.format)); }});
    f.push_back({"text-delimiter", "separator between the two sides in text output", false,
                 [](AlignConfig& c, const std::string& v) {
                     std::string out;
                     for (std::size_t i = 0; i < v.size(); ++i) {
                         if (v[i] == '\\' && i + 1 < v.size() && v[i + 1] == 't') {
                             out += '\t';
                             ++i;
                         } else {
                             out += v[i];
                         }
                     }
                     c.text_delimiter = out;
                 },
                 [](const AlignConfig& c) {
                     std::string out;
                     for (char ch : c.text_delimiter) {
                         if (ch == '\t') {
                             out += "\\t";
                         } else {
                             out += ch;
                         }
                     }
                     return out;
                 }});
    return f;
}

} // namespace

void AlignConfig::validate() const {
    anchor.validate();
    intervals.validate();
    cost.validate();
    if (sent_ratio && !(*sent_ratio > 0.0)) {
        throw Error(ErrorCode::Config, "sent-ratio must be positive");
    }
    if (char_ratio && !(*char_ratio > 0.0)) {
        throw Error(ErrorCode::Config, "char-ratio must be positive");
    }
}

const std::vector<ConfigField>& config_fields() {
    static const std::vector<ConfigField> fields = build_fields();
    return fields;
}

void set_config_value(AlignConfig& config, const std::string& key, const std::string& value) {
    for (const auto& field : config_fields()) {
        if (field.name == key) {
            field.set(config, value);
            return;
        }
    }
    throw Error(ErrorCode::Config, "unknown config key '" + key + "'");
}

void apply_config_text(AlignConfig& config, const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') {
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorCode::Config, "expected key=value", line_no);
        }
        set_config_value(config, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
}

void apply_config_file(AlignConfig& config, const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot open config " + path);
    }
    apply_config_text(config, {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()});
}

std::string print_config(const AlignConfig& config) {
    std::string out;
    for (const auto& field : config_fields()) {
        out += field.name + "=" + field.get(config) + "\n";
    }
    return out;
}

} // namespace anchoralign
