#include "ppnet/dataset/manifest.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "ppnet/core/error.hpp"
#include "ppnet/core/io.hpp"
#include "ppnet/core/random.hpp"

namespace ppnet {

namespace fs = std::filesystem;

std::string_view split_name(Split split) {
    switch (split) {
        case Split::Train: return "train";
        case Split::Val: return "val";
        case Split::Test: return "test";
    }
    return "?";
}

Split parse_split(std::string_view text) {
    if (text == "train") return Split::Train;
    if (text == "val" || text == "validation") return Split::Val;
    if (text == "test") return Split::Test;
    throw InputError("unknown split '" + std::string(text) + "'");
}

std::string_view granularity_name(Granularity g) { return g == Granularity::PerImage ? "per_image" : "per_site"; }

Granularity parse_granularity(std::string_view text) {
    if (text == "per_image") return Granularity::PerImage;
    if (text == "per_site") return Granularity::PerSite;
    throw InputError("unknown granularity '" + std::string(text) + "' (expected per_image or per_site)");
}

std::vector<std::size_t> DatasetManifest::indices(Split split) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < entries.size(); ++i)
        if (entries[i].split == split) out.push_back(i);
    return out;
}

std::vector<std::vector<std::size_t>> DatasetManifest::by_class(Split split) const {
    std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(label_map.size()));
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].split != split) continue;
        const int label = entries[i].label;
        if (label < 0 || label >= label_map.size())
            throw InputError("manifest entry " + std::to_string(i) + " has label outside the label map");
        out[static_cast<std::size_t>(label)].push_back(i);
    }
    return out;
}

nlohmann::json DatasetManifest::to_json() const {
    nlohmann::json patches = nlohmann::json::array();
    for (const auto& e : entries)
        patches.push_back({{"path", e.path}, {"site_id", e.site_id}, {"label", e.label}, {"split", split_name(e.split)}});
    nlohmann::json j;
    j["task"] = task_name(task);
    j["label_map"] = label_map.to_json();
    j["patches"] = std::move(patches);
    j["norm_stats"] = norm_stats ? norm_stats->to_json() : nlohmann::json(nullptr);
    j["stats_scope"] = stats_scope;
    j["fractions"] = fractions;
    j["seed"] = seed;
    j["granularity"] = granularity_name(granularity);
    return j;
}

DatasetManifest DatasetManifest::from_json(const nlohmann::json& j) {
    DatasetManifest m;
    try {
        m.task = parse_task(j.at("task").get<std::string>());
        m.label_map = LabelMap::from_json(j.at("label_map"));
        for (const auto& p : j.at("patches"))
            m.entries.push_back({p.at("path").get<std::string>(), p.at("site_id").get<std::string>(),
                                 p.at("label").get<int>(), parse_split(p.at("split").get<std::string>())});
        if (j.contains("norm_stats") && !j["norm_stats"].is_null()) m.norm_stats = NormStats::from_json(j["norm_stats"]);
        m.stats_scope = j.value("stats_scope", "all");
        m.fractions = j.at("fractions").get<std::array<double, 3>>();
        m.seed = j.at("seed").get<std::uint64_t>();
        m.granularity = parse_granularity(j.at("granularity").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("invalid dataset manifest: ") + e.what());
    }
    return m;
}

void DatasetManifest::save(const fs::path& path) const {
    DatasetManifest copy = *this;
    const fs::path base = fs::absolute(path).parent_path();
    for (auto& e : copy.entries)
        if (!e.path.empty()) e.path = fs::absolute(e.path).lexically_relative(base).generic_string();
    io::write_json(path, copy.to_json());
}

DatasetManifest DatasetManifest::load(const fs::path& path) {
    if (!fs::exists(path)) throw InputError("manifest not found: " + path.string());
    DatasetManifest m = from_json(io::read_json(path));
    const fs::path base = fs::absolute(path).parent_path();
    for (auto& e : m.entries)
        if (!e.path.empty() && fs::path(e.path).is_relative()) e.path = (base / e.path).lexically_normal().string();
    return m;
}

namespace {

// Largest-remainder apportionment of n units over the fractions.
std::array<std::size_t, 3> apportion(std::size_t n, const std::array<double, 3>& f) {
    std::array<std::size_t, 3> counts{};
    std::array<double, 3> rem{};
    std::size_t assigned = 0;
    for (int s = 0; s < 3; ++s) {
        const double raw = f[s] * static_cast<double>(n);
        counts[s] = static_cast<std::size_t>(std::floor(raw + 1e-9));
        rem[s] = raw - static_cast<double>(counts[s]);
        assigned += counts[s];
    }
    while (assigned < n) {
        int best = 0;
        for (int s = 1; s < 3; ++s)
            if (rem[s] > rem[best] + 1e-12) best = s;
        ++counts[best];
        rem[best] = -1.0;
        ++assigned;
    }
    // Fill an empty split from the largest one when both stay within one
    // unit of their quota.
    for (int s = 0; s < 3; ++s) {
        if (counts[s] > 0 || f[s] <= 0.0) continue;
        const auto donor = static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
        const double quota = f[donor] * static_cast<double>(n);
        if (counts[donor] < 2 || static_cast<double>(counts[donor] - 1) < quota - 1.0 - 1e-9) continue;
        --counts[donor];
        ++counts[s];
    }
    return counts;
}

}  // namespace

DatasetManifest split_dataset(std::span<const PatchInfo> patches, const LabelMap& labels, Task task,
                              std::array<double, 3> fractions, std::uint64_t seed, Granularity granularity) {
    if (patches.empty()) throw InputError("cannot split an empty patch list");
    const double total = fractions[0] + fractions[1] + fractions[2];
    if (std::abs(total - 1.0) > 1e-9 || *std::min_element(fractions.begin(), fractions.end()) < 0.0)
        throw InputError("split fractions must be non-negative and sum to 1");

    DatasetManifest m;
    m.task = task;
    m.label_map = labels;
    m.fractions = fractions;
    m.seed = seed;
    m.granularity = granularity;
    m.entries.reserve(patches.size());
    for (const auto& p : patches) {
        if (p.label < 0 || p.label >= labels.size())
            throw InputError("patch '" + p.path + "' has label " + std::to_string(p.label) + " outside the label map");
        m.entries.push_back({p.path, p.site_id, p.label, Split::Train});
    }

    for (int cls = 0; cls < labels.size(); ++cls) {
        // Units: key -> member entry indices. Keys are sorted so the shuffle
        // input does not depend on the order of `patches`.
        std::map<std::string, std::vector<std::size_t>> units;
        for (std::size_t i = 0; i < m.entries.size(); ++i) {
            if (m.entries[i].label != cls) continue;
            const bool per_site = granularity == Granularity::PerSite && m.entries[i].site_id != kBackgroundSiteId;
            std::string key = per_site ? "site:" + m.entries[i].site_id
                                       : "img:" + m.entries[i].path + "#" + std::to_string(i);
            units[key].push_back(i);
        }
        if (units.empty()) continue;
        std::vector<const std::vector<std::size_t>*> order;
        for (const auto& [k, v] : units) order.push_back(&v);
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(cls)));
        std::shuffle(order.begin(), order.end(), rng);

        const auto counts = apportion(order.size(), fractions);
        for (int s = 0; s < 3; ++s)
            if (counts[s] == 0 && fractions[s] > 0.0)
                throw InputError("class '" + labels.name(cls) + "' has no patches in the " +
                                 std::string(split_name(static_cast<Split>(s))) + " split (only " +
                                 std::to_string(order.size()) + " split units)");
        std::size_t u = 0;
        for (int s = 0; s < 3; ++s)
            for (std::size_t k = 0; k < counts[s]; ++k, ++u)
                for (std::size_t idx : *order[u]) m.entries[idx].split = static_cast<Split>(s);
    }
    return m;
}

}  // namespace ppnet
