#include "monocal/model_file.hpp"

#include <json.hpp>

#include <set>

namespace monocal {

using json = nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const char* where) {
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.count(key)) {
            throw Error(ErrorKind::Parse, std::string("unknown field '") + key + "' in " + where);
        }
    }
}

const json& require(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) throw Error(ErrorKind::Parse, std::string("missing field '") + key + "'");
    return *it;
}

std::vector<double> number_array(const json& j, const char* key) {
    if (!j.is_array()) throw Error(ErrorKind::Parse, std::string("'") + key + "' must be an array");
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& v : j) {
        if (!v.is_number()) throw Error(ErrorKind::Parse, std::string("'") + key + "' must hold numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

} // namespace

Staircase ModelFile::staircase() const { return Staircase(breakpoints, values); }

ModelFile make_model(const Staircase& staircase, std::string family, ModelMetadata metadata) {
    ModelFile m;
    m.family = std::move(family);
    m.breakpoints.assign(staircase.breakpoints().begin(), staircase.breakpoints().end());
    m.values.assign(staircase.values().begin(), staircase.values().end());
    m.metadata = std::move(metadata);
    return m;
}

std::string write_model(const ModelFile& model) {
    using ordered = nlohmann::ordered_json;
    ordered meta = {
        {"solver", model.metadata.solver},
        {"merge_count", model.metadata.merge_count},
        {"total_loss", model.metadata.total_loss},
    };
    if (model.metadata.delta) meta["delta"] = *model.metadata.delta;
    if (model.metadata.iterations) meta["iterations"] = *model.metadata.iterations;
    if (model.metadata.width_bound) meta["width_bound"] = *model.metadata.width_bound;

    ordered doc = {
        {"version", model.version},
        {"family", model.family},
        {"breakpoints", model.breakpoints},
        {"values", model.values},
        {"metadata", meta},
    };
    return doc.dump(2) + "\n";
}

ModelFile read_model(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::Parse, std::string("model is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw Error(ErrorKind::Parse, "model must be a JSON object");
    reject_unknown(doc, {"version", "family", "breakpoints", "values", "metadata"}, "model");

    ModelFile m;
    try {
        const auto& version = require(doc, "version");
        if (!version.is_number_integer() || version.get<int>() != kModelVersion) {
            throw Error(ErrorKind::Parse, "unsupported model version " + version.dump());
        }
        const auto& family = require(doc, "family");
        if (!family.is_string()) throw Error(ErrorKind::Parse, "'family' must be a string");
        m.family = family.get<std::string>();
        m.breakpoints = number_array(require(doc, "breakpoints"), "breakpoints");
        m.values = number_array(require(doc, "values"), "values");

        const auto& meta = require(doc, "metadata");
        if (!meta.is_object()) throw Error(ErrorKind::Parse, "'metadata' must be an object");
        reject_unknown(meta, {"solver", "merge_count", "total_loss", "delta", "iterations", "width_bound"},
                       "metadata");
        const auto& solver = require(meta, "solver");
        const auto& merges = require(meta, "merge_count");
        const auto& loss = require(meta, "total_loss");
        if (!solver.is_string()) throw Error(ErrorKind::Parse, "'solver' must be a string");
        if (!merges.is_number_unsigned()) throw Error(ErrorKind::Parse, "'merge_count' must be a count");
        if (!loss.is_number()) throw Error(ErrorKind::Parse, "'total_loss' must be a number");
        m.metadata.solver = solver.get<std::string>();
        m.metadata.merge_count = merges.get<std::size_t>();
        m.metadata.total_loss = loss.get<double>();
        if (auto it = meta.find("delta"); it != meta.end()) {
            if (!it->is_number()) throw Error(ErrorKind::Parse, "'delta' must be a number");
            m.metadata.delta = it->get<double>();
        }
        if (auto it = meta.find("iterations"); it != meta.end()) {
            if (!it->is_number_unsigned()) throw Error(ErrorKind::Parse, "'iterations' must be a count");
            m.metadata.iterations = it->get<std::size_t>();
        }
        if (auto it = meta.find("width_bound"); it != meta.end()) {
            if (!it->is_number()) throw Error(ErrorKind::Parse, "'width_bound' must be a number");
            m.metadata.width_bound = it->get<double>();
        }
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Parse, e.what());
    }
    (void)m.staircase();
    return m;
}

} // namespace monocal
