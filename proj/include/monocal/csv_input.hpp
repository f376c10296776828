#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "monocal/error.hpp"

namespace monocal {

// Parses a real number; accepts "inf", "+inf", "-inf" (any case).
// Throws Parse on anything else, InvalidValue on NaN.
double parse_real(std::string_view field);

// Shortest decimal text that reads back to the same double.
std::string format_real(double value);

struct TrainingRow {
    std::size_t row = 0;  // 1-based data row, header excluded
    std::size_t line = 0; // 1-based line in the file
    double score = 0.0;
    double target = 0.0;
    double weight = 1.0;
};

// Row-at-a-time reader for `score,target[,weight]` files with a header.
// Errors are Error(Parse) whose message names the row.
class TrainingCsvReader {
public:
    explicit TrainingCsvReader(std::istream& in);

    std::optional<TrainingRow> next();
    bool has_weight() const noexcept { return weight_col_.has_value(); }

private:
    std::istream* in_;
    std::size_t line_ = 0;
    std::size_t row_ = 0;
    std::size_t columns_ = 0;
    std::size_t score_col_ = 0;
    std::size_t target_col_ = 0;
    std::optional<std::size_t> weight_col_;
};

std::vector<TrainingRow> read_training_csv(std::istream& in);

// Reads the `score` column of a CSV with a header; other columns are ignored.
std::vector<double> read_score_csv(std::istream& in);

} // namespace monocal
