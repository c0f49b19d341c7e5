#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>

#include "ppnet/core/io.hpp"
#include "ppnet/dataset/augment.hpp"
#include "ppnet/dataset/label_map.hpp"
#include "ppnet/dataset/manifest.hpp"
#include "ppnet/dataset/normalization.hpp"
#include "ppnet/dataset/patch_set.hpp"
#include "ppnet/dataset/sampling.hpp"
#include "ppnet/dataset/synthetic.hpp"
#include "ppnet/ingest/patch_io.hpp"
#include "support/temp_dir.hpp"

using namespace ppnet;

namespace {

Tensor<float> ramp_image(int c, int h, int w) {
    Tensor<float> t({c, h, w});
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<float>(i);
    return t;
}

// Independent oracle: mirror columns, then quarter-turns counter-clockwise
// (out[i][j] = in[j][n - 1 - i], as numpy.rot90).
Tensor<float> oracle_transform(const Tensor<float>& x, int id) {
    const int c = x.dim(0), n = x.dim(1);
    Tensor<float> cur = x;
    if (id >= 4) {
        Tensor<float> m(cur.shape());
        for (int ch = 0; ch < c; ++ch)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) m.at(ch, i, j) = cur.at(ch, i, n - 1 - j);
        cur = m;
    }
    for (int r = 0; r < id % 4; ++r) {
        Tensor<float> m(cur.shape());
        for (int ch = 0; ch < c; ++ch)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) m.at(ch, i, j) = cur.at(ch, j, n - 1 - i);
        cur = m;
    }
    return cur;
}

std::vector<PatchInfo> infos(const std::vector<int>& class_sizes, int patches_per_site = 1) {
    std::vector<PatchInfo> out;
    for (std::size_t cls = 0; cls < class_sizes.size(); ++cls)
        for (int i = 0; i < class_sizes[cls]; ++i)
            out.push_back({"p" + std::to_string(cls) + "_" + std::to_string(i),
                           "site" + std::to_string(cls) + "_" + std::to_string(i / patches_per_site),
                           static_cast<int>(cls)});
    return out;
}

}  // namespace

TEST_CASE("dihedral transforms match the index oracle") {
    const auto x = ramp_image(2, 5, 5);
    for (int id = 0; id < kDihedralCount; ++id) {
        CAPTURE(id);
        CHECK(augment(x, id) == oracle_transform(x, id));
    }
    CHECK(augment(x, 0) == x);
    CHECK_THROWS_AS(augment(x, 8), InputError);
    CHECK_THROWS_AS(augment(ramp_image(1, 3, 4), 1), InputError);
}

TEST_CASE("dihedral composition closes over all 64 pairs") {
    const auto x = ramp_image(1, 6, 6);
    std::set<int> seen;
    for (int a = 0; a < kDihedralCount; ++a) {
        for (int b = 0; b < kDihedralCount; ++b) {
            const int c = dihedral_compose(a, b);
            REQUIRE(c >= 0);
            REQUIRE(c < kDihedralCount);
            CHECK(augment(augment(x, a), b) == augment(x, c));
        }
        CHECK(dihedral_compose(a, dihedral_inverse(a)) == 0);
        CHECK(augment(augment(x, a), dihedral_inverse(a)) == x);
    }
}

TEST_CASE("label maps and task labels") {
    CHECK(LabelMap::plant().size() == 11);
    CHECK(LabelMap::plant().name(10) == "Background");
    CHECK(LabelMap::cooling().size() == 4);
    CHECK(LabelMap::plant().index("Solar") == 8);
    CHECK_FALSE(LabelMap::plant().index("Coal"));
    CHECK(LabelMap::from_json(LabelMap::cooling().to_json()) == LabelMap::cooling());
    CHECK(parse_task("plant_11") == Task::Plant);
    CHECK(parse_task("cooling") == Task::Cooling);
    CHECK_THROWS_AS(parse_task("weather"), InputError);
    Patch p;
    p.label = 2;
    CHECK(task_label(p, Task::Plant) == 2);
    CHECK_THROWS_AS(task_label(p, Task::Cooling), InputError);
    p.cooling_label = 3;
    CHECK(task_label(p, Task::Cooling) == 3);
}

TEST_CASE("splits are disjoint, exhaustive and 80/10/10 within one per class") {
    const auto in = infos({100, 37, 11, 5, 6});
    const auto m = split_dataset(in, LabelMap({"a", "b", "c", "d", "e"}), Task::Plant, {0.8, 0.1, 0.1}, 9);
    REQUIRE(m.entries.size() == in.size());
    std::set<std::string> paths;
    for (const auto& e : m.entries) paths.insert(e.path);
    CHECK(paths.size() == in.size());
    for (int cls = 0; cls < 5; ++cls) {
        int n = 0, counts[3] = {0, 0, 0};
        for (const auto& e : m.entries)
            if (e.label == cls) {
                ++n;
                ++counts[static_cast<int>(e.split)];
            }
        CHECK(std::abs(counts[0] - 0.8 * n) <= 1.0);
        CHECK(std::abs(counts[1] - 0.1 * n) <= 1.0);
        CHECK(std::abs(counts[2] - 0.1 * n) <= 1.0);
        for (int s = 0; s < 3; ++s) CHECK(counts[s] >= 1);
    }
    const auto again = split_dataset(in, LabelMap({"a", "b", "c", "d", "e"}), Task::Plant, {0.8, 0.1, 0.1}, 9);
    CHECK(again.to_json() == m.to_json());
    CHECK_THROWS_AS(split_dataset(infos({10, 4}), LabelMap({"a", "b"}), Task::Plant, {0.8, 0.1, 0.1}, 1), InputError);
}

TEST_CASE("per-site splits keep each site in one split") {
    const auto in = infos({60, 40}, 4);
    const auto m =
        split_dataset(in, LabelMap({"a", "b"}), Task::Plant, {0.8, 0.1, 0.1}, 2, Granularity::PerSite);
    std::map<std::string, std::set<Split>> by_site;
    for (const auto& e : m.entries) by_site[e.site_id].insert(e.split);
    for (const auto& [site, splits] : by_site) CHECK(splits.size() == 1);
}

TEST_CASE("balanced epochs are exactly uniform and oversample small classes evenly") {
    const auto m = split_dataset(infos({200, 50, 8}), LabelMap({"a", "b", "c"}), Task::Plant, {0.8, 0.1, 0.1}, 4);
    const auto train = m.by_class(Split::Train);
    const int small = static_cast<int>(train[2].size());
    for (int per_class : {1, 7, 40, 160}) {
        const auto e = balanced_epoch(m, Split::Train, per_class, epoch_seed(3, 1));
        REQUIRE(e.size() == static_cast<std::size_t>(3 * per_class));
        std::map<int, int> count;
        std::map<std::size_t, int> uses;
        for (auto i : e) {
            ++count[m.entries[i].label];
            ++uses[i];
            CHECK(m.entries[i].split == Split::Train);
        }
        for (int cls = 0; cls < 3; ++cls) CHECK(count[cls] == per_class);
        // Each member of the small class appears floor(k/n) or ceil(k/n) times.
        for (auto i : train[2]) {
            CHECK(uses[i] >= per_class / small);
            CHECK(uses[i] <= (per_class + small - 1) / small);
        }
    }
    CHECK(balanced_epoch(m, Split::Train, 40, 5) == balanced_epoch(m, Split::Train, 40, 5));
    CHECK(balanced_epoch(m, Split::Train, 40, 5) != balanced_epoch(m, Split::Train, 40, 6));
    CHECK(min_class_size(m, Split::Train) == small);
}

TEST_CASE("streaming band statistics match a two-pass oracle") {
    std::mt19937 rng(5);
    std::normal_distribution<float> d(1000.0f, 0.01f);  // large offset, tiny spread
    std::vector<Tensor<float>> images;
    for (int k = 0; k < 9; ++k) {
        Tensor<float> t({3, 4, 5});
        for (auto& v : t.storage()) v = d(rng);
        images.push_back(t);
    }
    NormAccumulator a(3), b(3), all(3);
    for (int k = 0; k < 9; ++k) {
        (k < 4 ? a : b).add(images[static_cast<std::size_t>(k)]);
        all.add(images[static_cast<std::size_t>(k)]);
    }
    a.merge(b);
    const auto s = a.finish(), s_all = all.finish();
    for (int ch = 0; ch < 3; ++ch) {
        long double sum = 0.0L, sq = 0.0L;
        std::size_t n = 0;
        for (const auto& t : images)
            for (int i = 0; i < 20; ++i) {
                sum += t[static_cast<std::size_t>(ch) * 20 + i];
                ++n;
            }
        const long double mean = sum / n;
        for (const auto& t : images)
            for (int i = 0; i < 20; ++i) {
                const long double dlt = t[static_cast<std::size_t>(ch) * 20 + i] - mean;
                sq += dlt * dlt;
            }
        const double sd = std::sqrt(static_cast<double>(sq / n));
        CHECK(s.mean[ch] == doctest::Approx(static_cast<double>(mean)).epsilon(1e-12));
        CHECK(s.std[ch] == doctest::Approx(sd).epsilon(1e-6));
        CHECK(s_all.std[ch] == doctest::Approx(sd).epsilon(1e-6));
    }
    NormAccumulator one(3);
    one.add(images[0]);
    CHECK_THROWS_AS(one.finish(), InputError);
}

TEST_CASE("normalised training patches have zero mean and unit spread per band") {
    const auto patches = generate_synthetic_set(Task::Cooling, 6, 2);
    const auto set = make_patch_set(patches, Task::Cooling, 1, Granularity::PerImage, StatsScope::Train);
    NormAccumulator acc;
    for (auto i : set.manifest.indices(Split::Train)) acc.add(set.image(i));
    const auto s = acc.finish();
    for (int b = 0; b < kPatchChannels; ++b) {
        CHECK(std::abs(s.mean[b]) <= 1e-4);
        CHECK(std::abs(s.std[b] - 1.0) <= 1e-4);
    }
    const auto& st = *set.manifest.norm_stats;
    const auto back = denormalize(set.image(0), st);
    for (std::size_t i = 0; i < back.size(); i += 101)
        CHECK(back[i] == doctest::Approx(patches[0].pixels[i]).epsilon(1e-5));
}

TEST_CASE("manifests store paths relative to their directory") {
    testing::TempDir dir;
    const auto patches = generate_synthetic_set(Task::Cooling, 5, 3);
    std::vector<PatchInfo> in;
    for (std::size_t i = 0; i < patches.size(); ++i) {
        write_patch(dir / "patches", "p" + std::to_string(i), patches[i]);
        in.push_back({(dir / "patches" / ("p" + std::to_string(i) + ".patch")).string(), patches[i].site_id,
                      *patches[i].cooling_label});
    }
    auto m = split_dataset(in, LabelMap::cooling(), Task::Cooling, {0.8, 0.1, 0.1}, 1);
    m.norm_stats = stats_from_manifest(m, StatsScope::All);
    m.save(dir / "ds/manifest.json");
    const auto raw = io::read_json(dir / "ds/manifest.json");
    CHECK(raw.at("patches").at(0).at("path").get<std::string>().rfind("../patches/", 0) == 0);
    const auto back = DatasetManifest::load(dir / "ds/manifest.json");
    CHECK(back.entries.size() == m.entries.size());
    const auto set = load_patch_set(back);
    CHECK(set.images.size() == patches.size());
    const auto direct = compute_norm_stats(patches);
    for (int b = 0; b < kPatchChannels; ++b) {
        CHECK(back.norm_stats->mean[b] == doctest::Approx(direct.mean[b]).epsilon(1e-12));
        CHECK(back.norm_stats->std[b] == doctest::Approx(direct.std[b]).epsilon(1e-9));
    }
}

TEST_CASE("synthetic generator is deterministic and physically plausible") {
    const auto a = generate_synthetic_with_mask(Task::Plant, 7, 42);
    const auto b = generate_synthetic_with_mask(Task::Plant, 7, 42);
    CHECK(a.patch.pixels == b.patch.pixels);
    CHECK(a.motif_mask == b.motif_mask);
    CHECK(a.patch.pixels.shape() == Shape{10, 100, 100});
    CHECK_NOTHROW(validate_patch(a.patch));
    CHECK(a.patch.label == 7);
    CHECK(std::count(a.motif_mask.begin(), a.motif_mask.end(), 1) > 50);
    const auto bg = generate_synthetic_with_mask(Task::Plant, kBackgroundLabel, 1);
    CHECK(std::count(bg.motif_mask.begin(), bg.motif_mask.end(), 1) == 0);
    const auto c = generate_synthetic(Task::Cooling, 2, 9);
    REQUIRE(c.cooling_label);
    CHECK(*c.cooling_label == 2);
    CHECK(is_thermal(static_cast<PlantClass>(c.label)));
}
