#include "monocal/csv_input.hpp"

#include <algorithm>
#include <charconv>
#include <cctype>
#include <cmath>
#include <limits>

namespace monocal {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        fields.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

// Next non-blank line, or nullopt at end of input.
std::optional<std::string> next_line(std::istream& in, std::size_t& line_no) {
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (!trim(line).empty()) return line;
    }
    return std::nullopt;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

} // namespace

double parse_real(std::string_view field) {
    field = trim(field);
    const std::string l = lower(field);
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (l == "inf" || l == "+inf" || l == "infinity" || l == "+infinity") return inf;
    if (l == "-inf" || l == "-infinity") return -inf;
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    double value = 0.0;
    const auto* end = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (field.empty() || ec != std::errc() || ptr != end) {
        throw Error(ErrorKind::Parse, "not a number: '" + std::string(field) + "'");
    }
    if (std::isnan(value)) throw Error(ErrorKind::InvalidValue, "NaN is not allowed");
    return value;
}

std::string format_real(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

TrainingCsvReader::TrainingCsvReader(std::istream& in) : in_(&in) {
    auto header = next_line(in, line_);
    if (!header) throw Error(ErrorKind::Parse, "missing header line");
    std::optional<std::size_t> score;
    std::optional<std::size_t> target;
    const auto names = split(*header);
    columns_ = names.size();
    for (std::size_t i = 0; i < names.size(); ++i) {
        const auto name = lower(names[i]);
        std::optional<std::size_t>* slot = nullptr;
        if (name == "score") slot = &score;
        else if (name == "target") slot = &target;
        else if (name == "weight") slot = &weight_col_;
        else throw Error(ErrorKind::Parse, "unexpected column '" + std::string(names[i]) + "' in header");
        if (slot->has_value()) throw Error(ErrorKind::Parse, "duplicate column '" + name + "' in header");
        *slot = i;
    }
    if (!score || !target) throw Error(ErrorKind::Parse, "header must name 'score' and 'target' columns");
    score_col_ = *score;
    target_col_ = *target;
}

std::optional<TrainingRow> TrainingCsvReader::next() {
    auto line = next_line(*in_, line_);
    if (!line) return std::nullopt;
    ++row_;
    const std::string where = "row " + std::to_string(row_) + " (line " + std::to_string(line_) + ")";
    const auto fields = split(*line);
    if (fields.size() != columns_) {
        throw Error(ErrorKind::Parse, where + ": expected " + std::to_string(columns_) + " fields, got " +
                                          std::to_string(fields.size()));
    }
    TrainingRow r;
    r.row = row_;
    r.line = line_;
    try {
        r.score = parse_real(fields[score_col_]);
        r.target = parse_real(fields[target_col_]);
        if (weight_col_) r.weight = parse_real(fields[*weight_col_]);
    } catch (const Error& e) {
        throw Error(ErrorKind::Parse, where + ": " + e.what());
    }
    if (!std::isfinite(r.target)) throw Error(ErrorKind::Parse, where + ": target must be finite");
    if (!(r.weight > 0.0) || !std::isfinite(r.weight)) {
        throw Error(ErrorKind::Parse, where + ": weight must be positive and finite");
    }
    return r;
}

std::vector<TrainingRow> read_training_csv(std::istream& in) {
    TrainingCsvReader reader(in);
    std::vector<TrainingRow> rows;
    while (auto r = reader.next()) rows.push_back(*r);
    return rows;
}

std::vector<double> read_score_csv(std::istream& in) {
    std::size_t line_no = 0;
    auto header = next_line(in, line_no);
    if (!header) throw Error(ErrorKind::Parse, "missing header line");
    const auto names = split(*header);
    std::optional<std::size_t> col;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (lower(names[i]) == "score") col = i;
    }
    if (!col) throw Error(ErrorKind::Parse, "header must name a 'score' column");

    std::vector<double> scores;
    std::size_t row = 0;
    while (auto line = next_line(in, line_no)) {
        ++row;
        const auto fields = split(*line);
        const std::string where = "row " + std::to_string(row) + " (line " + std::to_string(line_no) + ")";
        if (fields.size() != names.size()) {
            throw Error(ErrorKind::Parse, where + ": expected " + std::to_string(names.size()) + " fields");
        }
        try {
            scores.push_back(parse_real(fields[*col]));
        } catch (const Error& e) {
            throw Error(ErrorKind::Parse, where + ": " + e.what());
        }
    }
    return scores;
}

} // namespace monocal
