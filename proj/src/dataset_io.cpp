#include "pusurv/dataset_io.hpp"

#include <json.hpp>

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace pusurv {

std::string format_double(double v) {
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf.data(), end);
}

double parse_double(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
        text.remove_suffix(1);
    }
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw std::invalid_argument("not a number: '" + std::string(text) + "'");
    }
    return v;
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(',', start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

bool blank(std::string_view s) { return s.find_first_not_of(" \t\r") == std::string_view::npos; }

void infer_mode(Dataset& d) {
    bool any_labeled = false;
    bool labeled_with_c = false;
    for (const auto& r : d.records) {
        if (r.label == 1) {
            any_labeled = true;
            labeled_with_c = labeled_with_c || r.censoring_time.has_value();
        }
    }
    d.c_observed_for_labeled = !any_labeled || labeled_with_c;
}

}  // namespace

Dataset read_dataset_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("dataset CSV: missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto header = split_fields(line);
    if (header.size() < 3 || header[0] != "t" || header[1] != "c" || header[2] != "s") {
        throw std::invalid_argument("dataset CSV: header must start with t,c,s");
    }
    Dataset d;
    d.dimension = header.size() - 3;
    for (std::size_t k = 0; k < d.dimension; ++k) {
        if (header[3 + k] != "x" + std::to_string(k + 1)) {
            throw std::invalid_argument("dataset CSV: expected column x" + std::to_string(k + 1));
        }
    }

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank(line)) continue;
        auto fields = split_fields(line);
        if (fields.size() != header.size()) {
            throw std::invalid_argument("dataset CSV line " + std::to_string(line_no) + ": expected " +
                                        std::to_string(header.size()) + " fields");
        }
        try {
            SubjectRecord r;
            if (!blank(fields[0])) r.survival_time = parse_double(fields[0]);
            if (!blank(fields[1])) r.censoring_time = parse_double(fields[1]);
            r.label = static_cast<int>(parse_double(fields[2]));
            r.covariates.resize(static_cast<Eigen::Index>(d.dimension));
            for (std::size_t k = 0; k < d.dimension; ++k) {
                r.covariates[static_cast<Eigen::Index>(k)] = parse_double(fields[3 + k]);
            }
            d.records.push_back(std::move(r));
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("dataset CSV line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    infer_mode(d);
    return d;
}

void write_dataset_csv(std::ostream& out, const Dataset& d) {
    out << "t,c,s";
    for (std::size_t k = 0; k < d.dimension; ++k) out << ",x" << (k + 1);
    out << '\n';
    for (const auto& r : d.records) {
        if (r.survival_time) out << format_double(*r.survival_time);
        out << ',';
        if (r.censoring_time) out << format_double(*r.censoring_time);
        out << ',' << r.label;
        for (Eigen::Index k = 0; k < r.covariates.size(); ++k) out << ',' << format_double(r.covariates[k]);
        out << '\n';
    }
}

Dataset read_dataset_json(std::istream& in) {
    nlohmann::json doc = nlohmann::json::parse(in);
    if (!doc.is_array()) throw std::invalid_argument("dataset JSON: top level must be an array");
    Dataset d;
    bool first = true;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const auto& obj = doc[i];
        SubjectRecord r;
        if (obj.contains("t") && !obj["t"].is_null()) r.survival_time = obj["t"].get<double>();
        if (obj.contains("c") && !obj["c"].is_null()) r.censoring_time = obj["c"].get<double>();
        r.label = obj.at("s").get<int>();
        const auto& x = obj.at("x");
        r.covariates.resize(static_cast<Eigen::Index>(x.size()));
        for (std::size_t k = 0; k < x.size(); ++k) r.covariates[static_cast<Eigen::Index>(k)] = x[k].get<double>();
        if (first) {
            d.dimension = x.size();
            first = false;
        } else if (x.size() != d.dimension) {
            throw std::invalid_argument("dataset JSON: record " + std::to_string(i) + " has inconsistent dimension");
        }
        d.records.push_back(std::move(r));
    }
    infer_mode(d);
    return d;
}

void write_dataset_json(std::ostream& out, const Dataset& d) {
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& r : d.records) {
        nlohmann::json obj;
        if (r.survival_time) obj["t"] = *r.survival_time;
        if (r.censoring_time) obj["c"] = *r.censoring_time;
        obj["s"] = r.label;
        obj["x"] = std::vector<double>(r.covariates.data(), r.covariates.data() + r.covariates.size());
        doc.push_back(std::move(obj));
    }
    out << doc.dump() << '\n';
}

Dataset load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return path.extension() == ".json" ? read_dataset_json(in) : read_dataset_csv(in);
}

void save_dataset(const std::filesystem::path& path, const Dataset& d) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    if (path.extension() == ".json") {
        write_dataset_json(out, d);
    } else {
        write_dataset_csv(out, d);
    }
}

}  // namespace pusurv
