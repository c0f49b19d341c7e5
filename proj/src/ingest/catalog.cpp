#include "ppnet/ingest/catalog.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <set>
#include <sstream>

#include "ppnet/core/io.hpp"

namespace ppnet {

namespace {

constexpr std::array<std::string_view, 5> kColumns = {"site_id", "latitude", "longitude", "plant_class",
                                                      "cooling_class"};

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

// Splits one CSV record; supports double-quoted fields with "" escapes.
std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                cur += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            fields.push_back(trim(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    fields.push_back(trim(cur));
    return fields;
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

std::string csv_quote(std::string_view s) {
    if (s.find_first_of(",\"") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

CatalogError::CatalogError(std::vector<CatalogIssue> issues)
    : InputError([&] {
          std::ostringstream os;
          os << "catalog has " << issues.size() << " invalid row(s):";
          for (const auto& i : issues) os << "\n  row " << i.row << ", field '" << i.field << "': " << i.message;
          return os.str();
      }()),
      issues_(std::move(issues)) {}

std::vector<SiteRecord> parse_catalog(std::string_view text) {
    std::vector<std::string> lines;
    {
        std::string cur;
        for (char c : text) {
            if (c == '\n') {
                lines.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        if (!cur.empty()) lines.push_back(cur);
    }
    if (!lines.empty() && lines[0].rfind("\xEF\xBB\xBF", 0) == 0) lines[0].erase(0, 3);
    if (lines.empty()) throw CatalogError({{0, "header", "catalog is empty"}});

    const auto header = split_csv_line(lines[0]);
    std::array<int, kColumns.size()> col{};
    for (std::size_t k = 0; k < kColumns.size(); ++k) {
        auto it = std::find(header.begin(), header.end(), kColumns[k]);
        if (it == header.end())
            throw CatalogError({{0, std::string(kColumns[k]), "missing column '" + std::string(kColumns[k]) + "'"}});
        col[k] = static_cast<int>(it - header.begin());
    }

    std::vector<SiteRecord> sites;
    std::vector<CatalogIssue> issues;
    std::set<std::string> seen;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (trim(lines[li]).empty()) continue;
        const int row = static_cast<int>(li);
        const auto f = split_csv_line(lines[li]);
        if (f.size() != header.size()) {
            issues.push_back({row, "*", "expected " + std::to_string(header.size()) + " fields, found " +
                                            std::to_string(f.size())});
            continue;
        }
        SiteRecord s;
        bool ok = true;
        auto fail = [&](std::string_view field, std::string msg) {
            issues.push_back({row, std::string(field), std::move(msg)});
            ok = false;
        };
        s.site_id = f[col[0]];
        if (s.site_id.empty()) fail("site_id", "empty site_id");
        else if (!seen.insert(s.site_id).second) fail("site_id", "duplicate site_id '" + s.site_id + "'");
        if (!parse_double(f[col[1]], s.location.lat) || s.location.lat < -90 || s.location.lat > 90)
            fail("latitude", "invalid latitude '" + f[col[1]] + "'");
        if (!parse_double(f[col[2]], s.location.lon) || s.location.lon < -180 || s.location.lon > 180)
            fail("longitude", "invalid longitude '" + f[col[2]] + "'");
        if (auto pc = parse_plant_class(f[col[3]])) s.plant_class = *pc;
        else fail("plant_class", "unknown plant class '" + f[col[3]] + "'");
        if (!f[col[4]].empty()) {
            if (auto cc = parse_cooling_class(f[col[4]])) s.cooling_class = *cc;
            else fail("cooling_class", "unknown cooling class '" + f[col[4]] + "'");
        }
        if (ok && s.cooling_class && !is_thermal(s.plant_class))
            fail("cooling_class", "cooling class given for non-thermal plant '" + f[col[3]] + "'");
        if (ok) sites.push_back(std::move(s));
    }
    if (!issues.empty()) throw CatalogError(std::move(issues));
    return sites;
}

std::vector<SiteRecord> load_catalog(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw InputError("catalog not found: " + path.string());
    return parse_catalog(io::read_file(path));
}

void write_catalog(const std::filesystem::path& path, const std::vector<SiteRecord>& sites) {
    std::string out = "site_id,latitude,longitude,plant_class,cooling_class\n";
    char buf[64];
    for (const auto& s : sites) {
        out += csv_quote(s.site_id) + ",";
        std::snprintf(buf, sizeof(buf), "%.8f,%.8f,", s.location.lat, s.location.lon);
        out += buf;
        out += csv_quote(plant_class_label(s.plant_class)) + ",";
        if (s.cooling_class) out += csv_quote(cooling_class_label(*s.cooling_class));
        out += "\n";
    }
    io::write_file_atomic(path, out);
}

std::vector<SiteRecord> cooling_subset(const std::vector<SiteRecord>& sites) {
    std::vector<SiteRecord> out;
    std::copy_if(sites.begin(), sites.end(), std::back_inserter(out),
                 [](const SiteRecord& s) { return is_thermal(s.plant_class) && s.cooling_class.has_value(); });
    return out;
}

}  // namespace ppnet
