#include "ppnet/ingest/types.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "ppnet/core/error.hpp"

namespace ppnet {

namespace {

struct PlantNames {
    PlantClass cls;
    std::string_view name;
    std::string_view label;
};

constexpr std::array<PlantNames, kPlantClassCount> kPlantNames = {{
    {PlantClass::BrownCoal, "BrownCoal", "Fossil Brown coal/Lignite"},
    {PlantClass::Gas, "Gas", "Fossil Gas"},
    {PlantClass::HardCoal, "HardCoal", "Fossil Hard coal"},
    {PlantClass::Oil, "Oil", "Fossil Oil"},
    {PlantClass::HydroPumpedStorage, "HydroPumpedStorage", "Hydro Pumped Storage"},
    {PlantClass::HydroRunOfRiver, "HydroRunOfRiver", "Hydro Run-of-river and poundage"},
    {PlantClass::HydroReservoir, "HydroReservoir", "Hydro Water Reservoir"},
    {PlantClass::Nuclear, "Nuclear", "Nuclear"},
    {PlantClass::Solar, "Solar", "Solar"},
    {PlantClass::WindOnshore, "WindOnshore", "Wind Onshore"},
}};

struct CoolingNames {
    CoolingClass cls;
    std::string_view name;
    std::string_view label;
};

constexpr std::array<CoolingNames, kCoolingClassCount> kCoolingNames = {{
    {CoolingClass::AirCooling, "AirCooling", "air cooling"},
    {CoolingClass::MechanicalDraftTower, "MechanicalDraftTower", "mechanical draft tower"},
    {CoolingClass::NaturalDraftTower, "NaturalDraftTower", "natural draft tower"},
    {CoolingClass::OnceThrough, "OnceThrough", "once-through cooling"},
}};

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
           });
}

}  // namespace

std::string_view plant_class_name(PlantClass c) { return kPlantNames[static_cast<int>(c)].name; }
std::string_view plant_class_label(PlantClass c) { return kPlantNames[static_cast<int>(c)].label; }
std::string_view cooling_class_name(CoolingClass c) { return kCoolingNames[static_cast<int>(c)].name; }
std::string_view cooling_class_label(CoolingClass c) { return kCoolingNames[static_cast<int>(c)].label; }

std::optional<PlantClass> parse_plant_class(std::string_view text) {
    for (const auto& n : kPlantNames)
        if (iequals(text, n.name) || iequals(text, n.label)) return n.cls;
    return std::nullopt;
}

std::optional<CoolingClass> parse_cooling_class(std::string_view text) {
    for (const auto& n : kCoolingNames)
        if (iequals(text, n.name) || iequals(text, n.label)) return n.cls;
    if (iequals(text, "once-through") || iequals(text, "once through")) return CoolingClass::OnceThrough;
    return std::nullopt;
}

bool is_thermal(PlantClass c) {
    switch (c) {
        case PlantClass::BrownCoal:
        case PlantClass::Gas:
        case PlantClass::HardCoal:
        case PlantClass::Oil:
        case PlantClass::Nuclear:
            return true;
        default:
            return false;
    }
}

void validate_site(const SiteRecord& site) {
    if (site.site_id.empty()) throw InputError("site_id is empty");
    if (!(site.location.lat >= -90.0 && site.location.lat <= 90.0))
        throw InputError("latitude out of range [-90, 90]: " + std::to_string(site.location.lat));
    if (!(site.location.lon >= -180.0 && site.location.lon <= 180.0))
        throw InputError("longitude out of range [-180, 180]: " + std::to_string(site.location.lon));
    if (site.cooling_class && !is_thermal(site.plant_class))
        throw InputError("cooling_class given for non-thermal plant class " +
                         std::string(plant_class_label(site.plant_class)));
}

int native_resolution(std::string_view band) {
    if (band == "B02" || band == "B03" || band == "B04" || band == "B08") return 10;
    if (band == "B05" || band == "B06" || band == "B07" || band == "B8A" || band == "B11" || band == "B12") return 20;
    if (band == "B01" || band == "B09" || band == "B10") return 60;
    throw InputError("unknown band name: " + std::string(band));
}

void validate_patch(const Patch& patch) {
    if (patch.pixels.shape() != Shape{kPatchChannels, kPatchSize, kPatchSize})
        throw InputError("patch must be 10x100x100, got " + shape_string(patch.pixels.shape()));
    for (float v : patch.pixels.values())
        if (!std::isfinite(v) || v < 0.0f) throw InputError("patch reflectance must be finite and >= 0");
}

}  // namespace ppnet
