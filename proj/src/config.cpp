#include "projifs/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace projifs {

ParseError::ParseError(std::string src, int line_no, int col, const std::string& message)
    : std::runtime_error(src + ":" + std::to_string(line_no) + ":" + std::to_string(col) + ": " + message),
      source(std::move(src)),
      line(line_no),
      column(col) {}

namespace {

double parse_decimal(std::string_view s) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || end != s.data() + s.size())
        throw std::invalid_argument("not a number: '" + std::string(s) + "'");
    return v;
}

struct Token {
    std::string text;
    int column;
};

std::vector<Token> split(std::string_view line, int first_column) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == ',')) ++i;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != ',') ++i;
        if (i > start) out.push_back({std::string(line.substr(start, i - start)), first_column + static_cast<int>(start)});
    }
    return out;
}

struct RawConfig {
    std::vector<std::array<Affine, 4>> rows;
    std::vector<int> row_lines;
    std::optional<std::vector<double>> probs;
    int probs_line = 0;
    NormKind norm = NormKind::Operator2;
    int depth_cap = 12;
    std::uint64_t seed = 1;
};

RawConfig parse_raw(std::string_view text, const std::string& source) {
    RawConfig raw;
    bool in_matrices = false;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        const auto colon = line.find(':');
        if (colon != std::string_view::npos) {
            std::string_view key = line.substr(0, colon);
            const auto key_start = key.find_first_not_of(" \t");
            if (key_start == std::string_view::npos)
                throw ParseError(source, line_no, static_cast<int>(colon) + 1, "missing key before ':'");
            key = key.substr(key_start, key.find_last_not_of(" \t") - key_start + 1);
            const auto value = split(line.substr(colon + 1), static_cast<int>(colon) + 2);
            auto single = [&]() -> const Token& {
                if (value.size() != 1)
                    throw ParseError(source, line_no, static_cast<int>(colon) + 2,
                                     "key '" + std::string(key) + "' takes one value");
                return value[0];
            };
            in_matrices = false;
            if (key == "matrices") {
                if (!value.empty())
                    throw ParseError(source, line_no, value[0].column, "matrix rows go on the following lines");
                in_matrices = true;
            } else if (key == "probs") {
                std::vector<double> p;
                for (const auto& tok : value) {
                    try {
                        p.push_back(parse_number(tok.text));
                    } catch (const std::invalid_argument& e) {
                        throw ParseError(source, line_no, tok.column, e.what());
                    }
                }
                raw.probs = std::move(p);
                raw.probs_line = line_no;
            } else if (key == "norm") {
                const Token& tok = single();
                try {
                    raw.norm = parse_norm(tok.text);
                } catch (const std::invalid_argument& e) {
                    throw ParseError(source, line_no, tok.column, e.what());
                }
            } else if (key == "depth_cap" || key == "seed") {
                const Token& tok = single();
                unsigned long long v = 0;
                const auto [end, ec] = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), v);
                if (ec != std::errc() || end != tok.text.data() + tok.text.size())
                    throw ParseError(source, line_no, tok.column, "expected a non-negative integer");
                if (key == "seed") raw.seed = v;
                else raw.depth_cap = static_cast<int>(v);
            } else {
                throw ParseError(source, line_no, static_cast<int>(key_start) + 1,
                                 "unknown key '" + std::string(key) + "'");
            }
            continue;
        }

        const auto tokens = split(line, 1);
        if (tokens.empty()) continue;
        if (!in_matrices) throw ParseError(source, line_no, tokens[0].column, "expected 'key: value'");
        if (tokens.size() != 4) {
            const int col = tokens.size() > 4 ? tokens[4].column : static_cast<int>(line.size()) + 1;
            throw ParseError(source, line_no, col,
                             "matrix row needs 4 numbers (a b c d), got " + std::to_string(tokens.size()));
        }
        std::array<Affine, 4> row;
        for (int k = 0; k < 4; ++k) {
            try {
                row[k] = parse_affine(tokens[k].text);
            } catch (const std::invalid_argument& e) {
                throw ParseError(source, line_no, tokens[k].column, e.what());
            }
        }
        raw.rows.push_back(row);
        raw.row_lines.push_back(line_no);
    }
    if (raw.rows.empty()) throw ParseError(source, line_no, 1, "no matrices given");
    return raw;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

double parse_number(std::string_view token) {
    const auto slash = token.find('/');
    if (slash == std::string_view::npos) return parse_decimal(token);
    const double num = parse_decimal(token.substr(0, slash));
    const double den = parse_decimal(token.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(token) + "'");
    return num / den;
}

Affine parse_affine(std::string_view token) {
    if (token.find('t') == std::string_view::npos) return {parse_number(token), 0};
    Affine out;
    std::size_t i = 0;
    while (i < token.size()) {
        // a term runs up to the next sign that is not part of an exponent
        std::size_t j = i + 1;
        while (j < token.size() && !((token[j] == '+' || token[j] == '-') && token[j - 1] != 'e' && token[j - 1] != 'E'))
            ++j;
        std::string_view term = token.substr(i, j - i);
        i = j;
        double sign = 1;
        if (term.front() == '+' || term.front() == '-') {
            sign = term.front() == '-' ? -1 : 1;
            term.remove_prefix(1);
        }
        if (term.empty()) throw std::invalid_argument("dangling sign in '" + std::string(token) + "'");
        const auto t_pos = term.find('t');
        if (t_pos == std::string_view::npos) {
            out.constant += sign * parse_number(term);
            continue;
        }
        // forms: t, 3t, 3*t, 1/2*t, t/2
        std::string_view before = term.substr(0, t_pos), after = term.substr(t_pos + 1);
        if (!before.empty() && before.back() == '*') before.remove_suffix(1);
        double coef = before.empty() ? 1 : parse_number(before);
        if (!after.empty()) {
            if (after.front() != '/') throw std::invalid_argument("cannot read term '" + std::string(term) + "'");
            coef /= parse_number(after.substr(1));
        }
        out.slope += sign * coef;
    }
    return out;
}

bool FamilyConfig::constant() const {
    for (const auto& row : rows)
        for (const auto& e : row)
            if (e.slope != 0) return false;
    return true;
}

SystemConfig FamilyConfig::at(double t) const {
    SystemConfig cfg;
    for (const auto& row : rows) cfg.alphabet.push_back(Matrix2::normalized(row[0].at(t), row[1].at(t), row[2].at(t), row[3].at(t)));
    cfg.probs = probs;
    cfg.norm = norm;
    cfg.depth_cap = depth_cap;
    cfg.seed = seed;
    return cfg;
}

ParsedConfig parse_config_text(std::string_view text, const std::string& source) {
    const RawConfig raw = parse_raw(text, source);
    ParsedConfig out;
    for (std::size_t i = 0; i < raw.rows.size(); ++i) {
        const auto& row = raw.rows[i];
        for (const auto& e : row)
            if (e.slope != 0) throw ParseError(source, raw.row_lines[i], 1, "parameter t is only allowed in family files");
        const double a = row[0].constant, b = row[1].constant, c = row[2].constant, d = row[3].constant;
        const double det = a * d - b * c;
        if (!(det > 0))
            throw ParseError(source, raw.row_lines[i], 1,
                             det == 0 ? "matrix is not invertible" : "matrix reverses orientation (det < 0)");
        if (std::abs(det - 1) > kDetTol) {
            out.warnings.push_back(source + ":" + std::to_string(raw.row_lines[i]) + ": determinant " + fmt(det) +
                                   " renormalized to 1");
            out.config.alphabet.push_back(Matrix2::normalized(a, b, c, d));
        } else {
            out.config.alphabet.push_back(Matrix2{a, b, c, d});
        }
    }
    out.config.probs = raw.probs;
    out.config.norm = raw.norm;
    out.config.depth_cap = raw.depth_cap;
    out.config.seed = raw.seed;
    try {
        out.config.validate();
    } catch (const std::invalid_argument& e) {
        throw ParseError(source, raw.probs ? raw.probs_line : 1, 1, e.what());
    }
    return out;
}

ParsedConfig parse_config(const std::filesystem::path& path) {
    return parse_config_text(read_file(path), path.string());
}

FamilyConfig parse_family_text(std::string_view text, const std::string& source) {
    RawConfig raw = parse_raw(text, source);
    FamilyConfig fam;
    fam.rows = std::move(raw.rows);
    fam.probs = std::move(raw.probs);
    fam.norm = raw.norm;
    fam.depth_cap = raw.depth_cap;
    fam.seed = raw.seed;
    if (fam.probs) {
        double total = 0;
        for (double p : *fam.probs) total += p;
        if (fam.probs->size() != fam.rows.size() || std::abs(total - 1) > kDetTol)
            throw ParseError(source, raw.probs_line, 1, "probs must match the matrices and sum to 1");
    }
    return fam;
}

FamilyConfig parse_family(const std::filesystem::path& path) {
    return parse_family_text(read_file(path), path.string());
}

std::string emit_config(const SystemConfig& cfg) {
    std::string out = "matrices:\n";
    for (const auto& m : cfg.alphabet) out += "  " + fmt(m.a) + " " + fmt(m.b) + " " + fmt(m.c) + " " + fmt(m.d) + "\n";
    if (cfg.probs) {
        out += "probs:";
        for (double p : *cfg.probs) out += " " + fmt(p);
        out += "\n";
    }
    out += std::string("norm: ") + to_string(cfg.norm) + "\n";
    out += "depth_cap: " + std::to_string(cfg.depth_cap) + "\n";
    out += "seed: " + std::to_string(cfg.seed) + "\n";
    return out;
}

}  // namespace projifs
