#pragma once

#include <iosfwd>
#include <string>

#include "btrank/comparison_data.hpp"

namespace btrank {

// Long format, header `winner,loser,count`. A count of 0 registers its
// labels without recording a comparison; save_csv relies on this to keep
// first-appearance label order stable across a round trip.
ComparisonData load_csv(const std::string& path);
ComparisonData load_csv(std::istream& in, const std::string& name = "<stream>");

void save_csv(const ComparisonData& data, const std::string& path);
void save_csv(const ComparisonData& data, std::ostream& out);

// {"labels": [...], "W": [[...]]}
std::string to_json(const ComparisonData& data);
void save_json(const ComparisonData& data, const std::string& path);

}  // namespace btrank
