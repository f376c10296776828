#pragma once

// On-disk calibration model: a JSON document holding the fitted staircase and
// the statistics of the fit that produced it.
//
//   {
//     "version": 1,
//     "family": "square",
//     "breakpoints": [4.5, 9.5, 14.5],
//     "values": [32, 47, 55, 69],
//     "metadata": {"solver": "stack", "merge_count": 11, "total_loss": 13000}
//   }
//
// Anytime fits add "delta", "iterations" and "width_bound" to the metadata.
// Unknown fields are rejected on read. Numbers are written in the shortest
// form that reads back to the identical double.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "monocal/core.hpp"

namespace monocal {

inline constexpr int kModelVersion = 1;

struct ModelMetadata {
    std::string solver;
    std::size_t merge_count = 0;
    double total_loss = 0.0;
    std::optional<double> delta;
    std::optional<std::size_t> iterations;
    std::optional<double> width_bound;

    friend bool operator==(const ModelMetadata&, const ModelMetadata&) = default;
};

struct ModelFile {
    int version = kModelVersion;
    std::string family;
    std::vector<double> breakpoints;
    std::vector<double> values;
    ModelMetadata metadata;

    // Throws InvalidValue if the stored steps are not a valid staircase.
    Staircase staircase() const;

    friend bool operator==(const ModelFile&, const ModelFile&) = default;
};

ModelFile make_model(const Staircase& staircase, std::string family, ModelMetadata metadata);

std::string write_model(const ModelFile& model);

// Throws Parse on malformed JSON, unknown or missing fields, wrong types or an
// unsupported version; InvalidValue if the staircase invariants fail.
ModelFile read_model(std::string_view text);

} // namespace monocal
