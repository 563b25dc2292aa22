#pragma once

// Dataset persistence.
//
// CSV: header `t,c,s,x1,...,xp`, one row per subject, an empty field means the
// value is absent. JSON: an array of objects `{"t": .., "c": .., "s": .., "x": [..]}`
// where `t` and `c` are omitted when absent. Both formats write doubles in
// shortest round-trip form, so load(save(d)) reproduces every value bit-exactly.
//
// Neither format stores the censoring mode; it is inferred on load: c-observed
// iff some labeled row carries a censoring time (or there are no labeled rows).

#include "pusurv/model.hpp"

#include <filesystem>
#include <iosfwd>

namespace pusurv {

Dataset read_dataset_csv(std::istream& in);
void write_dataset_csv(std::ostream& out, const Dataset& d);

Dataset read_dataset_json(std::istream& in);
void write_dataset_json(std::ostream& out, const Dataset& d);

/// Chooses the format from the extension (`.json` vs anything else = CSV).
Dataset load_dataset(const std::filesystem::path& path);
void save_dataset(const std::filesystem::path& path, const Dataset& d);

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);
double parse_double(std::string_view text);

}  // namespace pusurv
