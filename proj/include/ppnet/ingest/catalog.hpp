#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ppnet/core/error.hpp"
#include "ppnet/ingest/types.hpp"

namespace ppnet {

struct CatalogIssue {
    int row = 0;  // 1-based data row (header is row 0)
    std::string field;
    std::string message;
};

/// Raised when one or more catalog rows fail validation; lists all of them.
class CatalogError : public InputError {
public:
    explicit CatalogError(std::vector<CatalogIssue> issues);
    const std::vector<CatalogIssue>& issues() const { return issues_; }

private:
    std::vector<CatalogIssue> issues_;
};

/// CSV with header site_id,latitude,longitude,plant_class,cooling_class
/// (any column order). Empty cooling_class means no cooling.
std::vector<SiteRecord> parse_catalog(std::string_view csv_text);
std::vector<SiteRecord> load_catalog(const std::filesystem::path& path);
void write_catalog(const std::filesystem::path& path, const std::vector<SiteRecord>& sites);

/// Thermal plants that report a cooling mechanism.
std::vector<SiteRecord> cooling_subset(const std::vector<SiteRecord>& sites);

}  // namespace ppnet
