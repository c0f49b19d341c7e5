#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "ppnet/core/date.hpp"
#include "ppnet/core/tensor.hpp"

namespace ppnet {

enum class PlantClass {
    BrownCoal,
    Gas,
    HardCoal,
    Oil,
    HydroPumpedStorage,
    HydroRunOfRiver,
    HydroReservoir,
    Nuclear,
    Solar,
    WindOnshore,
};
inline constexpr int kPlantClassCount = 10;

enum class CoolingClass {
    AirCooling,
    MechanicalDraftTower,
    NaturalDraftTower,
    OnceThrough,
};
inline constexpr int kCoolingClassCount = 4;

/// Short identifier ("BrownCoal").
std::string_view plant_class_name(PlantClass c);
/// Database nomenclature ("Fossil Brown coal/Lignite").
std::string_view plant_class_label(PlantClass c);
std::string_view cooling_class_name(CoolingClass c);
std::string_view cooling_class_label(CoolingClass c);

/// Accepts either the short identifier or the database label, case-insensitively.
std::optional<PlantClass> parse_plant_class(std::string_view text);
std::optional<CoolingClass> parse_cooling_class(std::string_view text);

/// Fossil fuel and nuclear plants.
bool is_thermal(PlantClass c);

struct LatLon {
    double lat = 0.0;
    double lon = 0.0;
};

struct SiteRecord {
    std::string site_id;
    LatLon location;
    PlantClass plant_class = PlantClass::BrownCoal;
    std::optional<CoolingClass> cooling_class;
};

/// Throws InputError when the record violates its invariants.
void validate_site(const SiteRecord& site);

/// The ten non-atmospheric bands, in patch channel order.
inline constexpr std::array<std::string_view, 10> kPatchBands = {"B02", "B03", "B04", "B05", "B06",
                                                                 "B07", "B08", "B8A", "B11", "B12"};
inline constexpr std::array<std::string_view, 13> kAllBands = {"B01", "B02", "B03", "B04", "B05", "B06", "B07",
                                                               "B08", "B8A", "B09", "B10", "B11", "B12"};
/// Native ground sampling distance of a band in metres (10, 20 or 60).
int native_resolution(std::string_view band);

inline constexpr int kPatchSize = 100;        // pixels per edge
inline constexpr double kPixelSize = 10.0;    // metres
inline constexpr int kPatchChannels = 10;
inline constexpr std::string_view kBackgroundSiteId = "background";
/// Plant-task label of background patches (after the ten plant classes).
inline constexpr int kBackgroundLabel = kPlantClassCount;

struct Patch {
    Tensor<float> pixels;  // channel, row, column
    std::string site_id;
    int label = -1;
    std::optional<int> cooling_label;
    std::string raster_id;
    Date acquisition_date{};
    LatLon center;
    double pixel_size = kPixelSize;
};

/// Throws InputError on wrong shape or non-finite/negative reflectance.
void validate_patch(const Patch& patch);

}  // namespace ppnet
