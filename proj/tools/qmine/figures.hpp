#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qmine/analysis/distribution.hpp"

namespace qmine::cli {

// Static SVG charts. Output is deterministic for identical inputs.
void write_distribution_figure(const std::vector<analysis::DistributionRow>& rows,
                               const std::string& path);

void write_engagement_figure(const std::vector<analysis::EngagementRow>& rows,
                             const std::string& path);

void write_confusion_figure(const std::vector<std::string>& class_names,
                            const std::vector<std::vector<int64_t>>& counts,
                            const std::string& path);

}  // namespace qmine::cli
