#include "ppnet/dataset/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "ppnet/core/error.hpp"
#include "ppnet/core/image.hpp"

namespace ppnet {

namespace {

using Spectrum = std::array<float, kPatchChannels>;

// Band order B02 B03 B04 B05 B06 B07 B08 B8A B11 B12.
constexpr Spectrum kVegetation{0.030f, 0.060f, 0.035f, 0.100f, 0.260f, 0.310f, 0.340f, 0.350f, 0.190f, 0.090f};
constexpr Spectrum kSoil{0.090f, 0.120f, 0.150f, 0.180f, 0.210f, 0.230f, 0.250f, 0.260f, 0.320f, 0.260f};
constexpr Spectrum kClearWater{0.070f, 0.060f, 0.035f, 0.025f, 0.015f, 0.012f, 0.010f, 0.009f, 0.005f, 0.003f};
constexpr Spectrum kTurbidWater{0.085f, 0.100f, 0.085f, 0.075f, 0.050f, 0.038f, 0.030f, 0.028f, 0.012f, 0.007f};
constexpr Spectrum kConcrete{0.200f, 0.220f, 0.240f, 0.250f, 0.260f, 0.270f, 0.280f, 0.285f, 0.300f, 0.260f};
constexpr Spectrum kTowerInterior{0.045f, 0.050f, 0.055f, 0.058f, 0.060f, 0.062f, 0.065f, 0.066f, 0.060f, 0.050f};
constexpr Spectrum kBlackCoal{0.025f, 0.025f, 0.027f, 0.030f, 0.032f, 0.034f, 0.036f, 0.037f, 0.040f, 0.036f};
constexpr Spectrum kLignite{0.060f, 0.065f, 0.080f, 0.095f, 0.105f, 0.115f, 0.120f, 0.125f, 0.170f, 0.150f};
constexpr Spectrum kWhiteTank{0.380f, 0.390f, 0.400f, 0.400f, 0.400f, 0.400f, 0.400f, 0.400f, 0.360f, 0.300f};
constexpr Spectrum kOilTank{0.140f, 0.150f, 0.160f, 0.170f, 0.180f, 0.190f, 0.200f, 0.200f, 0.340f, 0.320f};
constexpr Spectrum kRedRoof{0.070f, 0.080f, 0.200f, 0.230f, 0.240f, 0.245f, 0.250f, 0.255f, 0.280f, 0.220f};
constexpr Spectrum kDome{0.320f, 0.330f, 0.330f, 0.320f, 0.310f, 0.300f, 0.290f, 0.290f, 0.240f, 0.180f};
constexpr Spectrum kSolarPanel{0.120f, 0.090f, 0.060f, 0.058f, 0.056f, 0.055f, 0.055f, 0.055f, 0.075f, 0.065f};
constexpr Spectrum kGravel{0.160f, 0.170f, 0.185f, 0.195f, 0.205f, 0.215f, 0.225f, 0.230f, 0.270f, 0.230f};
constexpr Spectrum kSteel{0.150f, 0.160f, 0.170f, 0.175f, 0.180f, 0.185f, 0.190f, 0.190f, 0.160f, 0.130f};
constexpr Spectrum kFan{0.040f, 0.042f, 0.044f, 0.046f, 0.048f, 0.050f, 0.052f, 0.052f, 0.045f, 0.040f};
constexpr Spectrum kCranePad{0.300f, 0.310f, 0.320f, 0.320f, 0.330f, 0.340f, 0.350f, 0.350f, 0.420f, 0.380f};

constexpr double kPi = std::numbers::pi;

class Canvas {
public:
    Canvas(Tensor<float>& scene, std::vector<std::uint8_t>* mask) : scene_(scene), mask_(mask) {}

    int rows() const { return scene_.dim(1); }
    int cols() const { return scene_.dim(2); }

    template <typename Inside>
    void fill(const Spectrum& material, double y0, double y1, double x0, double x1, Inside inside) {
        const int r0 = std::max(0, static_cast<int>(std::floor(y0)));
        const int r1 = std::min(rows() - 1, static_cast<int>(std::ceil(y1)));
        const int c0 = std::max(0, static_cast<int>(std::floor(x0)));
        const int c1 = std::min(cols() - 1, static_cast<int>(std::ceil(x1)));
        const std::size_t plane = static_cast<std::size_t>(rows()) * cols();
        for (int r = r0; r <= r1; ++r)
            for (int c = c0; c <= c1; ++c) {
                if (!inside(r + 0.5, c + 0.5)) continue;
                const std::size_t idx = static_cast<std::size_t>(r) * cols() + c;
                for (int b = 0; b < kPatchChannels; ++b) scene_.data()[b * plane + idx] = material[b];
                if (mask_) (*mask_)[idx] = 1;
            }
    }

    void disk(const Spectrum& m, double cy, double cx, double radius) {
        fill(m, cy - radius, cy + radius, cx - radius, cx + radius, [&](double y, double x) {
            return (y - cy) * (y - cy) + (x - cx) * (x - cx) <= radius * radius;
        });
    }

    void ring(const Spectrum& rim, const Spectrum& interior, double cy, double cx, double radius) {
        disk(rim, cy, cx, radius);
        disk(interior, cy, cx, radius * 0.55);
    }

    // Rectangle of size h x w centred at (cy, cx), rotated by `angle` radians.
    void rect(const Spectrum& m, double cy, double cx, double h, double w, double angle = 0.0) {
        const double ca = std::cos(angle), sa = std::sin(angle);
        const double reach = 0.5 * std::hypot(h, w);
        fill(m, cy - reach, cy + reach, cx - reach, cx + reach, [&](double y, double x) {
            const double dy = y - cy, dx = x - cx;
            const double u = dy * ca - dx * sa;  // along height
            const double v = dy * sa + dx * ca;  // along width
            return std::abs(u) <= h / 2 && std::abs(v) <= w / 2;
        });
    }

    // Thick segment from (y0, x0) to (y1, x1).
    void line(const Spectrum& m, double y0, double x0, double y1, double x1, double width) {
        const double dy = y1 - y0, dx = x1 - x0;
        const double len2 = std::max(dy * dy + dx * dx, 1e-9);
        fill(m, std::min(y0, y1) - width, std::max(y0, y1) + width, std::min(x0, x1) - width, std::max(x0, x1) + width,
             [&](double y, double x) {
                 const double t = std::clamp(((y - y0) * dy + (x - x0) * dx) / len2, 0.0, 1.0);
                 const double py = y0 + t * dy - y, px = x0 + t * dx - x;
                 return py * py + px * px <= width * width / 4;
             });
    }

    // Half-plane side of a line through (cy, cx) with normal angle `angle`,
    // at least `offset` pixels from it.
    void half_plane(const Spectrum& m, double cy, double cx, double angle, double offset) {
        const double ny = std::sin(angle), nx = std::cos(angle);
        fill(m, 0, rows(), 0, cols(), [&](double y, double x) { return (y - cy) * ny + (x - cx) * nx >= offset; });
    }

private:
    Tensor<float>& scene_;
    std::vector<std::uint8_t>* mask_;
};

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

// Smooth random field in [0, 1] on a rows x cols grid.
std::vector<float> smooth_field(Rng& rng, int rows, int cols, int cells) {
    const int gr = std::max(2, cells), gc = std::max(2, cells);
    std::vector<float> coarse(static_cast<std::size_t>(gr) * gc);
    for (auto& v : coarse) v = static_cast<float>(uniform(rng, 0.0, 1.0));
    return resize_bilinear(coarse, gr, gc, rows, cols);
}

void paint_plant(Canvas& cv, int cls, double cy, double cx, Rng& rng, double s) {
    switch (static_cast<PlantClass>(cls)) {
        case PlantClass::BrownCoal: {
            cv.rect(kLignite, cy, cx - 6 * s, uniform(rng, 18, 24) * s, uniform(rng, 26, 32) * s);
            const double ty = cy + uniform(rng, -6, 6) * s;
            cv.ring(kConcrete, kTowerInterior, ty, cx + 15 * s, 6.5 * s);
            cv.ring(kConcrete, kTowerInterior, ty + 13 * s, cx + 15 * s, 6.5 * s);
            break;
        }
        case PlantClass::Gas: {
            cv.rect(kConcrete, cy - 8 * s, cx, 10 * s, uniform(rng, 20, 26) * s);
            const int tanks = uniform_int(rng, 2, 3);
            for (int t = 0; t < tanks; ++t) cv.disk(kWhiteTank, cy + 7 * s, cx - 10 * s + 10 * s * t, 4.2 * s);
            break;
        }
        case PlantClass::HardCoal: {
            cv.rect(kBlackCoal, cy, cx, uniform(rng, 24, 30) * s, uniform(rng, 30, 36) * s, uniform(rng, -0.3, 0.3));
            cv.rect(kRedRoof, cy - 20 * s, cx + 14 * s, 9 * s, 11 * s);
            break;
        }
        case PlantClass::Oil: {
            const int nr = uniform_int(rng, 2, 3);
            for (int r = 0; r < nr; ++r)
                for (int c = 0; c < 3; ++c) cv.disk(kOilTank, cy + (r - (nr - 1) / 2.0) * 11 * s, cx + (c - 1) * 11 * s, 4.5 * s);
            break;
        }
        case PlantClass::HydroPumpedStorage: {
            const double r = uniform(rng, 13, 16) * s;
            cv.disk(kClearWater, cy, cx, r);
            const double a = uniform(rng, 0, 2 * kPi);
            cv.line(kConcrete, cy + std::sin(a - 0.7) * r, cx + std::cos(a - 0.7) * r, cy + std::sin(a + 0.7) * r,
                    cx + std::cos(a + 0.7) * r, 3.5 * s);
            cv.line(kGravel, cy + std::sin(a) * r, cx + std::cos(a) * r, cy + std::sin(a) * (r + 30 * s),
                    cx + std::cos(a) * (r + 30 * s), 2.5 * s);
            break;
        }
        case PlantClass::HydroRunOfRiver: {
            const double a = uniform(rng, 0, kPi);
            const double dy = std::sin(a) * 80, dx = std::cos(a) * 80;
            cv.line(kTurbidWater, cy - dy, cx - dx, cy + dy, cx + dx, uniform(rng, 9, 12) * s);
            const double py = -std::cos(a) * 9 * s, px = std::sin(a) * 9 * s;
            cv.line(kConcrete, cy - py, cx - px, cy + py, cx + px, 3.5 * s);
            cv.rect(kConcrete, cy + py * 1.4, cx + px * 1.4, 6 * s, 6 * s, a);
            break;
        }
        case PlantClass::HydroReservoir: {
            const double a = uniform(rng, 0, 2 * kPi);
            cv.half_plane(kClearWater, cy, cx, a, 2.0 * s);
            const double ty = -std::cos(a), tx = std::sin(a);
            cv.line(kConcrete, cy - ty * 14 * s, cx - tx * 14 * s, cy + ty * 14 * s, cx + tx * 14 * s, 4.0 * s);
            break;
        }
        case PlantClass::Nuclear: {
            const int towers = uniform_int(rng, 2, 3);
            for (int t = 0; t < towers; ++t) cv.ring(kConcrete, kTowerInterior, cy - 10 * s, cx - 18 * s + 18 * s * t, 8 * s);
            cv.disk(kDome, cy + 10 * s, cx - 6 * s, 5 * s);
            cv.disk(kDome, cy + 10 * s, cx + 6 * s, 5 * s);
            break;
        }
        case PlantClass::Solar: {
            const double h = uniform(rng, 30, 38) * s, w = uniform(rng, 32, 40) * s;
            cv.rect(kGravel, cy, cx, h, w);
            for (double y = cy - h / 2 + 2 * s; y < cy + h / 2 - 1; y += 4 * s) cv.rect(kSolarPanel, y, cx, 2.2 * s, w - 2 * s);
            break;
        }
        case PlantClass::WindOnshore: {
            const int pads = uniform_int(rng, 6, 8);
            double py = cy, px = cx;
            for (int p = 0; p < pads; ++p) {
                const double ny = cy + uniform(rng, -30, 30) * s, nx = cx + uniform(rng, -30, 30) * s;
                cv.line(kGravel, py, px, ny, nx, 2.5 * s);
                cv.disk(kCranePad, ny, nx, 4.5 * s);
                py = ny;
                px = nx;
            }
            break;
        }
    }
}

void paint_cooling(Canvas& cv, int cls, double cy, double cx, Rng& rng, double s) {
    // Generic plant building shared by every cooling class.
    cv.rect(kRedRoof, cy - 16 * s, cx - 16 * s, 10 * s, 14 * s);
    switch (static_cast<CoolingClass>(cls)) {
        case CoolingClass::AirCooling: {
            const double h = 16 * s, w = 28 * s;
            cv.rect(kSteel, cy + 4 * s, cx + 4 * s, h, w);
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 6; ++c) cv.disk(kFan, cy + 4 * s + (r - 1) * 5 * s, cx + 4 * s + (c - 2.5) * 4.6 * s, 1.6 * s);
            break;
        }
        case CoolingClass::MechanicalDraftTower: {
            const int cells = uniform_int(rng, 4, 6);
            for (int c = 0; c < cells; ++c) {
                const double x = cx + 4 * s + (c - (cells - 1) / 2.0) * 6.5 * s;
                cv.rect(kGravel, cy + 6 * s, x, 6 * s, 6 * s);
                cv.disk(kFan, cy + 6 * s, x, 2.0 * s);
            }
            break;
        }
        case CoolingClass::NaturalDraftTower: {
            const int towers = uniform_int(rng, 1, 3);
            for (int t = 0; t < towers; ++t) cv.ring(kDome, kTowerInterior, cy + 8 * s, cx + 4 * s + (t - (towers - 1) / 2.0) * 19 * s, 8.5 * s);
            break;
        }
        case CoolingClass::OnceThrough: {
            const double a = uniform(rng, 0, 2 * kPi);
            cv.half_plane(kTurbidWater, cy, cx, a, 18 * s);
            cv.line(kTurbidWater, cy, cx, cy + std::sin(a) * 22 * s, cx + std::cos(a) * 22 * s, 4 * s);
            break;
        }
    }
}

}  // namespace

Tensor<float> synthetic_land(Rng& rng, int rows, int cols, const SyntheticSceneSpec& spec) {
    const int cells_r = std::max(2, spec.field_cells * rows / spec.size);
    const auto mix = smooth_field(rng, rows, cols, cells_r);
    const auto bright = smooth_field(rng, rows, cols, cells_r);
    const double base = uniform(rng, 0.2, 0.8);
    Tensor<float> scene({kPatchChannels, rows, cols});
    const std::size_t plane = static_cast<std::size_t>(rows) * cols;
    for (std::size_t i = 0; i < plane; ++i) {
        const double w = std::clamp(base + 0.6 * (mix[i] - 0.5), 0.0, 1.0);  // vegetation share
        const double g = 0.9 + 0.2 * bright[i];
        for (int b = 0; b < kPatchChannels; ++b)
            scene.data()[b * plane + i] = static_cast<float>(g * (w * kVegetation[b] + (1.0 - w) * kSoil[b]));
    }
    return scene;
}

void paint_motif(Tensor<float>& scene, Task task, int class_index, double cy, double cx, Rng& rng,
                 const SyntheticSceneSpec& spec, std::vector<std::uint8_t>* mask) {
    const int classes = LabelMap::for_task(task).size();
    if (class_index < 0 || class_index >= classes)
        throw InputError("synthetic class index " + std::to_string(class_index) + " outside [0, " +
                         std::to_string(classes) + ")");
    Canvas cv(scene, mask);
    const double s = spec.motif_scale;
    if (task == Task::Plant) {
        if (class_index == kBackgroundLabel) return;
        paint_plant(cv, class_index, cy, cx, rng, s);
    } else {
        paint_cooling(cv, class_index, cy, cx, rng, s);
    }
}

SyntheticSample generate_synthetic_with_mask(Task task, int class_index, std::uint64_t seed,
                                             const SyntheticSceneSpec& spec) {
    const int classes = LabelMap::for_task(task).size();
    if (class_index < 0 || class_index >= classes)
        throw InputError("synthetic class index " + std::to_string(class_index) + " outside [0, " +
                         std::to_string(classes) + ")");
    Rng rng(mix_seed(mix_seed(seed, static_cast<std::uint64_t>(class_index)), task == Task::Plant ? 11 : 4));
    SyntheticSample out;
    out.motif_mask.assign(static_cast<std::size_t>(spec.size) * spec.size, 0);
    Tensor<float> scene = synthetic_land(rng, spec.size, spec.size, spec);
    const double cy = spec.size / 2.0 + uniform(rng, -spec.position_jitter, spec.position_jitter);
    const double cx = spec.size / 2.0 + uniform(rng, -spec.position_jitter, spec.position_jitter);
    paint_motif(scene, task, class_index, cy, cx, rng, spec, &out.motif_mask);

    std::normal_distribution<float> noise(0.0f, static_cast<float>(spec.noise_amplitude));
    for (float& v : scene.values()) v = std::max(0.001f, v + noise(rng));

    Patch& p = out.patch;
    p.pixels = std::move(scene);
    p.site_id = "synthetic-" + std::string(task_name(task)) + "-" + std::to_string(class_index) + "-" + std::to_string(seed);
    if (task == Task::Plant) {
        p.label = class_index;
        if (class_index == kBackgroundLabel) p.site_id = std::string(kBackgroundSiteId);
    } else {
        constexpr std::array<PlantClass, 5> thermal{PlantClass::BrownCoal, PlantClass::Gas, PlantClass::HardCoal,
                                                    PlantClass::Oil, PlantClass::Nuclear};
        p.label = static_cast<int>(thermal[static_cast<std::size_t>(uniform_int(rng, 0, 4))]);
        p.cooling_label = class_index;
    }
    p.raster_id = "synthetic";
    p.acquisition_date = Date{std::chrono::year{2020}, std::chrono::June, std::chrono::day{1}};
    p.center = {0.0, 0.0};
    return out;
}

Patch generate_synthetic(Task task, int class_index, std::uint64_t seed, const SyntheticSceneSpec& spec) {
    return generate_synthetic_with_mask(task, class_index, seed, spec).patch;
}

std::vector<Patch> generate_synthetic_set(Task task, int per_class, std::uint64_t seed, const SyntheticSceneSpec& spec) {
    const int classes = LabelMap::for_task(task).size();
    std::vector<Patch> out(static_cast<std::size_t>(classes) * per_class);
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < classes * per_class; ++i) {
        const int cls = i / per_class;
        out[static_cast<std::size_t>(i)] = generate_synthetic(task, cls, mix_seed(seed, static_cast<std::uint64_t>(i)), spec);
    }
    return out;
}

std::vector<SiteRecord> fixture_catalog(int sites_per_class, std::uint64_t seed) {
    std::vector<SiteRecord> sites;
    Rng rng(seed);
    int k = 0, thermal_k = 0;
    for (int cls = 0; cls < kPlantClassCount; ++cls) {
        for (int i = 0; i < sites_per_class; ++i, ++k) {
            SiteRecord s;
            s.site_id = "FX" + std::to_string(cls) + "_" + std::to_string(i);
            s.location.lat = 48.0 + 0.1 * (k / 20) + uniform(rng, -0.01, 0.01);
            s.location.lon = 7.0 + 0.12 * (k % 20) + uniform(rng, -0.01, 0.01);
            s.plant_class = static_cast<PlantClass>(cls);
            if (is_thermal(s.plant_class)) s.cooling_class = static_cast<CoolingClass>(thermal_k++ % kCoolingClassCount);
            sites.push_back(std::move(s));
        }
    }
    return sites;
}

RasterSource make_fixture_scene(const SiteRecord& site, const Date& date, const std::string& raster_id,
                                double cloud_cover, std::uint64_t seed, const FixtureSceneOptions& options) {
    const int n = options.scene_size;
    if (n % 6 != 0 || n < 2 * kPatchSize) throw InputError("fixture scene size must be a multiple of 6 and >= 200");
    const int zone = std::clamp(static_cast<int>(std::floor((site.location.lon + 180.0) / 6.0)) + 1, 1, 60);
    const UtmProjection proj(zone, site.location.lat >= 0.0);
    const MapPoint m = proj.forward(site.location);
    const double half = n * kPixelSize / 2.0;
    const double x0 = std::floor((m.x - half) / 60.0) * 60.0;
    const double y0 = std::ceil((m.y + half) / 60.0) * 60.0;

    RasterSource r;
    r.raster_id = raster_id;
    r.acquisition_date = date;
    r.crs = proj.crs();
    r.cloud_cover = cloud_cover;
    r.geotransform = GeoTransform({x0, kPixelSize, 0.0, y0, 0.0, -kPixelSize});

    // Site-stable content (land pattern and motif), then date-dependent gain and noise.
    const std::uint64_t site_seed = mix_seed(seed, fnv1a64(site.site_id));
    Rng site_rng(site_seed);
    SyntheticSceneSpec spec;
    spec.size = kPatchSize;
    Tensor<float> scene = synthetic_land(site_rng, n, n, spec);
    const PixelPoint p = r.geotransform.to_pixel(m);
    paint_motif(scene, Task::Plant, static_cast<int>(site.plant_class), p.row, p.col, site_rng, spec);
    if (site.cooling_class)
        paint_motif(scene, Task::Cooling, static_cast<int>(*site.cooling_class), p.row + 28, p.col + 22, site_rng, spec);

    Rng date_rng(mix_seed(site_seed, static_cast<std::uint64_t>(day_number(date))));
    const double season = 0.9 + 0.2 * std::sin(2.0 * kPi * static_cast<double>(static_cast<unsigned>(date.month())) / 12.0);
    std::normal_distribution<float> noise(0.0f, static_cast<float>(spec.noise_amplitude));
    for (float& v : scene.values()) v = std::max(0.001f, static_cast<float>(v * season) + noise(date_rng));

    const std::size_t plane = static_cast<std::size_t>(n) * n;
    auto band_at = [&](int channel, int res) {
        const int f = res / 10, rows = n / f;
        BandGrid g;
        g.rows = g.cols = rows;
        g.resolution_m = res;
        g.values.assign(static_cast<std::size_t>(rows) * rows, 0.0f);
        const float* src = scene.data() + static_cast<std::size_t>(channel) * plane;
        for (int rr = 0; rr < n; ++rr)
            for (int cc = 0; cc < n; ++cc) g.values[static_cast<std::size_t>(rr / f) * rows + cc / f] += src[rr * n + cc];
        for (float& v : g.values) v /= static_cast<float>(f * f);
        return g;
    };
    for (int b = 0; b < kPatchChannels; ++b) {
        const std::string name(kPatchBands[b]);
        r.bands[name] = band_at(b, native_resolution(name));
    }
    // Atmospheric bands: aerosol tracks the blue band, water vapour and cirrus are near-constant.
    r.bands["B01"] = band_at(0, 60);
    BandGrid vapour = band_at(6, 60);
    for (float& v : vapour.values) v = 0.3f * v + 0.01f;
    r.bands["B09"] = std::move(vapour);
    BandGrid cirrus = band_at(0, 60);
    for (float& v : cirrus.values) v = 0.002f;
    r.bands["B10"] = std::move(cirrus);
    r.validate();
    return r;
}

int write_fixture_scenes(const std::filesystem::path& raster_dir, const std::vector<SiteRecord>& sites,
                         std::uint64_t seed, const FixtureSceneOptions& options) {
    const int total = options.rasters_per_site + options.cloudy_per_site;
    if (total <= 0) return 0;
    int written = 0;
    for (const auto& site : sites) {
        Rng rng(mix_seed(seed, fnv1a64("dates:" + site.site_id)));
        std::vector<int> cloudy(static_cast<std::size_t>(total), 0);
        std::fill(cloudy.begin(), cloudy.begin() + options.cloudy_per_site, 1);
        std::shuffle(cloudy.begin(), cloudy.end(), rng);
        const int step = 350 / total;
        for (int k = 0; k < total; ++k) {
            const std::chrono::sys_days day =
                std::chrono::sys_days{Date{std::chrono::year{options.year}, std::chrono::January, std::chrono::day{1}}} +
                std::chrono::days{5 + k * step + uniform_int(rng, 0, std::max(0, step / 3))};
            const Date date{day};
            const double cc = cloudy[static_cast<std::size_t>(k)] ? uniform(rng, 0.4, 0.8) : uniform(rng, 0.0, 0.08);
            char id[96];
            std::snprintf(id, sizeof(id), "S2_%s_%04d%02u%02u", site.site_id.c_str(), static_cast<int>(date.year()),
                          static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
            write_raster_dir(raster_dir / id, make_fixture_scene(site, date, id, cc, seed, options));
            ++written;
        }
    }
    return written;
}

}  // namespace ppnet
