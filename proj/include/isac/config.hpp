// SPDX-License-Identifier: Apache-2.0
//
// Experiment and phase-noise model files. The format is a small TOML subset:
// `[section]` headers, `key = value` pairs, `#` comments, and values that are
// numbers (including inf), quoted strings, booleans or bracketed arrays
// (nesting and line continuation allowed). Every key is optional.

#ifndef ISAC_CONFIG_HPP
#define ISAC_CONFIG_HPP

#include "isac/channel.hpp"
#include "isac/experiment.hpp"
#include "isac/phase_noise.hpp"
#include "isac/system.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace isac::config {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Value;
using Array = std::vector<Value>;

struct Value {
    std::variant<double, std::string, bool, Array> data;
    int line = 0;
};

// Section name -> key -> value. Keys before any header live in section "".
using Document = std::map<std::string, std::map<std::string, Value>>;

namespace detail {

class Parser {
public:
    Parser(std::string_view text, std::string source) : text_(text), source_(std::move(source)) {}

    Document parse()
    {
        Document doc;
        std::string section;
        doc[section];
        while (!at_end()) {
            skip_blank();
            if (at_end())
                break;
            const char c = peek();
            if (c == '\n') {
                advance();
                continue;
            }
            if (c == '[') {
                advance();
                skip_inline_space();
                section = parse_bare_key();
                skip_inline_space();
                expect(']');
                end_of_line();
                if (doc.count(section) && !doc[section].empty())
                    fail("section [" + section + "] appears twice");
                doc[section];
                continue;
            }
            const int key_line = line_;
            std::string key = parse_bare_key();
            skip_inline_space();
            expect('=');
            skip_inline_space();
            Value v = parse_value();
            v.line = key_line;
            end_of_line();
            auto& table = doc[section];
            if (table.count(key))
                fail("duplicate key '" + key + "'");
            table.emplace(std::move(key), std::move(v));
        }
        return doc;
    }

private:
    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }
    void advance()
    {
        if (text_[pos_] == '\n')
            ++line_;
        ++pos_;
    }

    [[noreturn]] void fail(const std::string& what) const
    {
        throw ConfigError(source_ + ":" + std::to_string(line_) + ": " + what);
    }

    void skip_inline_space()
    {
        while (!at_end() && (peek() == ' ' || peek() == '\t' || peek() == '\r'))
            advance();
    }

    void skip_comment()
    {
        if (!at_end() && peek() == '#')
            while (!at_end() && peek() != '\n')
                advance();
    }

    // Whitespace, comments and newlines.
    void skip_blank()
    {
        for (;;) {
            skip_inline_space();
            skip_comment();
            if (!at_end() && peek() == '\n') {
                advance();
                continue;
            }
            return;
        }
    }

    void end_of_line()
    {
        skip_inline_space();
        skip_comment();
        if (!at_end() && peek() != '\n')
            fail("unexpected trailing characters");
    }

    void expect(char c)
    {
        if (at_end() || peek() != c)
            fail(std::string("expected '") + c + "'");
        advance();
    }

    std::string parse_bare_key()
    {
        const std::size_t start = pos_;
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-' ||
                             peek() == '.'))
            advance();
        if (pos_ == start)
            fail("expected a key");
        return std::string(text_.substr(start, pos_ - start));
    }

    Value parse_value()
    {
        if (at_end())
            fail("missing value");
        const char c = peek();
        if (c == '"')
            return {parse_string()};
        if (c == '[')
            return {parse_array()};
        const std::size_t start = pos_;
        while (!at_end() && !std::isspace(static_cast<unsigned char>(peek())) && peek() != ',' && peek() != ']' &&
               peek() != '#')
            advance();
        const std::string_view token = text_.substr(start, pos_ - start);
        if (token == "true")
            return {true};
        if (token == "false")
            return {false};
        return {parse_number(token)};
    }

    double parse_number(std::string_view token)
    {
        if (token == "inf" || token == "+inf")
            return std::numeric_limits<double>::infinity();
        if (token == "-inf")
            return -std::numeric_limits<double>::infinity();
        std::string cleaned;
        for (char ch : token)
            if (ch != '_')
                cleaned.push_back(ch);
        if (!cleaned.empty() && cleaned.front() == '+')
            cleaned.erase(0, 1);
        double out = 0.0;
        const auto* first = cleaned.data();
        const auto* last = cleaned.data() + cleaned.size();
        const auto [ptr, ec] = std::from_chars(first, last, out);
        if (cleaned.empty() || ec != std::errc() || ptr != last)
            fail("invalid value '" + std::string(token) + "'");
        return out;
    }

    std::string parse_string()
    {
        expect('"');
        std::string out;
        while (!at_end() && peek() != '"') {
            if (peek() == '\n')
                fail("unterminated string");
            if (peek() == '\\') {
                advance();
                if (at_end())
                    fail("unterminated string");
                const char e = peek();
                out.push_back(e == 'n' ? '\n' : e == 't' ? '\t' : e);
                advance();
                continue;
            }
            out.push_back(peek());
            advance();
        }
        expect('"');
        return out;
    }

    Array parse_array()
    {
        expect('[');
        Array out;
        skip_blank();
        if (!at_end() && peek() == ']') {
            advance();
            return out;
        }
        for (;;) {
            skip_blank();
            const int at = line_;
            Value v = parse_value();
            v.line = at;
            out.push_back(std::move(v));
            skip_blank();
            if (at_end())
                fail("unterminated array");
            if (peek() == ',') {
                advance();
                skip_blank();
                if (!at_end() && peek() == ']') {
                    advance();
                    return out;
                }
                continue;
            }
            expect(']');
            return out;
        }
    }

    std::string_view text_;
    std::string source_;
    std::size_t pos_ = 0;
    int line_ = 1;
};

} // namespace detail

inline Document parse(std::string_view text, const std::string& source = "<config>")
{
    return detail::Parser(text, source).parse();
}

inline std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::ios_base::failure("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Typed access with key diagnostics; consumed keys are tracked so leftovers can
// be reported as unknown.
class Section {
public:
    Section(const Document& doc, std::string name, std::string source)
        : name_(std::move(name)), source_(std::move(source))
    {
        if (auto it = doc.find(name_); it != doc.end())
            table_ = &it->second;
    }

    bool has(const std::string& key) const { return table_ && table_->count(key); }

    double number(const std::string& key, double fallback)
    {
        const Value* v = find(key);
        if (!v)
            return fallback;
        if (const auto* d = std::get_if<double>(&v->data))
            return *d;
        fail(*v, key, "expected a number");
    }

    std::size_t count(const std::string& key, std::size_t fallback)
    {
        const Value* v = find(key);
        if (!v)
            return fallback;
        const auto* d = std::get_if<double>(&v->data);
        if (!d || *d < 0.0 || *d != std::floor(*d) || *d > 9.0e15)
            fail(*v, key, "expected a non-negative integer");
        return static_cast<std::size_t>(*d);
    }

    std::string string(const std::string& key, const std::string& fallback)
    {
        const Value* v = find(key);
        if (!v)
            return fallback;
        if (const auto* s = std::get_if<std::string>(&v->data))
            return *s;
        fail(*v, key, "expected a string");
    }

    std::vector<double> numbers(const std::string& key, std::vector<double> fallback)
    {
        const Value* v = find(key);
        if (!v)
            return fallback;
        if (const auto* d = std::get_if<double>(&v->data))
            return {*d};
        const auto* arr = std::get_if<Array>(&v->data);
        if (!arr)
            fail(*v, key, "expected a list of numbers");
        std::vector<double> out;
        for (const auto& item : *arr) {
            const auto* d = std::get_if<double>(&item.data);
            if (!d)
                fail(item, key, "expected a list of numbers");
            out.push_back(*d);
        }
        return out;
    }

    const Value* find(const std::string& key)
    {
        if (!table_)
            return nullptr;
        auto it = table_->find(key);
        if (it == table_->end())
            return nullptr;
        used_.push_back(key);
        return &it->second;
    }

    // Runs fn, rewrapping std::invalid_argument as a keyed ConfigError.
    template <typename Fn>
    auto checked(const std::string& key, Fn&& fn) -> decltype(fn())
    {
        try {
            return fn();
        } catch (const std::invalid_argument& e) {
            const Value* v = table_ && table_->count(key) ? &table_->at(key) : nullptr;
            throw ConfigError(source_ + ":" + std::to_string(v ? v->line : 0) + ": [" + name_ + "] " + key + ": " +
                              e.what());
        }
    }

    void reject_unknown() const
    {
        if (!table_)
            return;
        for (const auto& [key, value] : *table_)
            if (std::find(used_.begin(), used_.end(), key) == used_.end())
                throw ConfigError(source_ + ":" + std::to_string(value.line) + ": unknown key '" + key +
                                  "' in section [" + name_ + "]");
    }

    [[noreturn]] void fail(const Value& v, const std::string& key, const std::string& what) const
    {
        throw ConfigError(source_ + ":" + std::to_string(v.line) + ": [" + name_ + "] " + key + ": " + what);
    }

private:
    std::string name_;
    std::string source_;
    const std::map<std::string, Value>* table_ = nullptr;
    std::vector<std::string> used_;
};

/// Phase-noise model file: top-level keys name, ref_level_dbc,
/// white_floor_dbc and poles = [[corner_hz, order], ...].
inline PhaseNoiseModel parse_pn_model(std::string_view text, const std::string& source = "<model>")
{
    const Document doc = parse(text, source);
    for (const auto& [name, table] : doc)
        if (!name.empty() && !table.empty())
            throw ConfigError(source + ": unexpected section [" + name + "] in phase noise model");

    Section top(doc, "", source);
    PhaseNoiseModel model;
    model.name = top.string("name", "custom");
    model.ref_level_dbc = top.number("ref_level_dbc", model.ref_level_dbc);
    model.white_floor_dbc = top.number("white_floor_dbc", model.white_floor_dbc);
    if (const Value* poles = top.find("poles")) {
        const auto* arr = std::get_if<Array>(&poles->data);
        if (!arr)
            top.fail(*poles, "poles", "expected [[corner_hz, order], ...]");
        for (const auto& item : *arr) {
            const auto* pair = std::get_if<Array>(&item.data);
            if (!pair || pair->size() != 2 || !std::holds_alternative<double>((*pair)[0].data) ||
                !std::holds_alternative<double>((*pair)[1].data))
                top.fail(item, "poles", "each pole must be [corner_hz, order]");
            const double corner = std::get<double>((*pair)[0].data);
            const double order = std::get<double>((*pair)[1].data);
            if (order != std::floor(order))
                top.fail(item, "poles", "pole order must be an integer");
            model.poles.push_back({corner, static_cast<int>(order)});
        }
    }
    top.reject_unknown();
    try {
        model.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(source + ": " + e.what());
    }
    return model;
}

inline PhaseNoiseModel load_pn_model(const std::filesystem::path& path)
{
    return parse_pn_model(read_file(path), path.string());
}

// Fully resolved experiment: the sweep plus how its PN variant was chosen.
struct ExperimentConfig {
    SweepSpec sweep;
    std::string pn_source = "preset:tuned_130ghz"; // for the self-describing header
    unsigned threads = 0;
};

/// Parses an experiment file. `base_dir` resolves a relative phase_noise.file.
inline ExperimentConfig parse_experiment(std::string_view text, const std::string& source = "<config>",
                                         const std::filesystem::path& base_dir = {})
{
    const Document doc = parse(text, source);
    for (const auto& [name, table] : doc) {
        if (name != "system" && name != "target" && name != "sweep" && name != "phase_noise" &&
            !(name.empty() && table.empty()))
            throw ConfigError(source + ": unknown section [" + name + "]");
    }

    ExperimentConfig out;
    SweepSpec& spec = out.sweep;

    Section sys(doc, "system", source);
    auto& cfg = spec.cfg;
    cfg.carrier_hz = sys.number("f_c_hz", cfg.carrier_hz);
    cfg.mu = static_cast<int>(sys.count("mu", static_cast<std::size_t>(cfg.mu)));
    cfg.n_subcarriers = sys.count("n_subcarriers", cfg.n_subcarriers);
    cfg.n_symbols = sys.count("m_symbols", cfg.n_symbols);
    cfg.n_cp = sys.count("n_cp", cfg.n_cp);
    cfg.k_fft = sys.count("k_fft", cfg.k_fft);
    cfg.l_fft = sys.count("l_fft", cfg.l_fft);
    cfg.window = sys.checked("window", [&] { return parse_window(sys.string("window", "rect")); });
    cfg.interpolation =
        sys.checked("interpolation", [&] { return parse_interpolation(sys.string("interpolation", "parabolic_db")); });
    sys.reject_unknown();
    sys.checked("system", [&] {
        cfg.validate();
        return 0;
    });

    Section tgt(doc, "target", source);
    auto& sc = spec.scenario;
    sc.range_m = tgt.number("range_m", sc.range_m);
    sc.velocity_mps = tgt.number("velocity_mps", sc.velocity_mps);
    sc.amplitude = tgt.number("amplitude", sc.amplitude);
    sc.rcs_dbsm = tgt.number("rcs_dbsm", sc.rcs_dbsm);
    tgt.reject_unknown();
    tgt.checked("target", [&] {
        sc.validate();
        return 0;
    });

    Section sw(doc, "sweep", source);
    spec.snr_list_db = sw.numbers("snr_db", spec.snr_list_db);
    spec.trials = sw.count("trials", spec.trials);
    spec.master_seed = sw.count("master_seed", spec.master_seed);
    out.threads = static_cast<unsigned>(sw.count("threads", 0));
    sw.reject_unknown();

    Section pn(doc, "phase_noise", source);
    spec.pn_mode = pn.checked("mode", [&] { return parse_pn_mode(pn.string("mode", "per_sample")); });
    const bool has_preset = pn.has("preset");
    const bool has_file = pn.has("file");
    if (has_preset && has_file)
        throw ConfigError(source + ": [phase_noise] give either preset or file, not both");
    if (spec.pn_mode == PhaseNoiseMode::off) {
        spec.pn_variants = {pn_off()};
        out.pn_source = "off";
        (void)pn.find("preset");
        (void)pn.find("file");
    } else if (has_file) {
        const std::filesystem::path rel = pn.string("file", "");
        const auto path = rel.is_absolute() || base_dir.empty() ? rel : base_dir / rel;
        spec.pn_variants = {pn_off(), pn_with(load_pn_model(path))};
        out.pn_source = "file:" + rel.string();
    } else {
        // Without an explicit preset the profile follows the carrier.
        const std::string fallback = cfg.carrier_hz < 100e9 ? "tgpp_70ghz" : "tuned_130ghz";
        const auto preset = pn.checked("preset", [&] { return parse_preset(pn.string("preset", fallback)); });
        spec.pn_variants = {pn_off(), pn_with(builtin_model(preset))};
        out.pn_source = "preset:" + std::string(to_string(preset));
    }
    pn.reject_unknown();

    try {
        spec.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(source + ": " + e.what());
    }
    return out;
}

inline ExperimentConfig load_experiment(const std::filesystem::path& path)
{
    return parse_experiment(read_file(path), path.string(), path.parent_path());
}

} // namespace isac::config

#endif // ISAC_CONFIG_HPP
