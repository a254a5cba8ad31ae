#include "glomorph/phantom.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include <nlohmann/json.hpp>

#include "glomorph/case_io.hpp"
#include "glomorph/errors.hpp"
#include "glomorph/geometry.hpp"
#include "glomorph/units.hpp"

namespace glomorph {

using nlohmann::json;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Geometry {
    double cx, cy;            // annulus center (px)
    double r_px;              // mid radius
    double half_px;           // base half width
    double mod_amp;           // fraction of width
    int mod_periods;
    double band_px;
    double mes_r_px;

    double half_at(double theta) const {
        if (mod_amp == 0.0 || mod_periods == 0) return half_px;
        return half_px * (1.0 + mod_amp * std::sin(mod_periods * theta));
    }
};

Geometry make_geometry(const PhantomSpec& s) {
    Geometry g;
    g.cx = (s.width_px - 1) / 2.0;
    g.cy = (s.height_px - 1) / 2.0;
    g.r_px = nm_to_px(s.radius_nm, s.nm_per_pixel);
    g.half_px = nm_to_px(s.width_nm, s.nm_per_pixel) / 2.0;
    g.mod_amp = s.width_modulation_amplitude;
    g.mod_periods = s.width_modulation_periods;
    g.band_px = nm_to_px(s.band_nm, s.nm_per_pixel);
    g.mes_r_px = nm_to_px(s.mesangium_radius_nm, s.nm_per_pixel);
    return g;
}

// theta normalized to [0, 1) turns, measured from the +x axis.
double turns_at(const Geometry& g, double x, double y) {
    const double t = std::atan2(y - g.cy, x - g.cx) / kTwoPi;
    return t < 0.0 ? t + 1.0 : t;
}

LabelImage rasterize_mask(const PhantomSpec& s, const Geometry& g) {
    LabelImage mask(s.width_px, s.height_px, kBackground);
    for (int y = 0; y < s.height_px; ++y) {
        for (int x = 0; x < s.width_px; ++x) {
            const double dx = x - g.cx, dy = y - g.cy;
            const double rho = std::hypot(dx, dy);
            if (rho <= g.mes_r_px) {
                mask.at(x, y) = kMesangium;
                continue;
            }
            const double half = g.half_at(std::atan2(dy, dx));
            if (std::abs(rho - g.r_px) <= half) {
                mask.at(x, y) = kGbm;
            } else if (rho > g.r_px + half && rho <= g.r_px + half + g.band_px) {
                mask.at(x, y) = kPodocyte;
            } else if (rho < g.r_px - half && rho >= g.r_px - half - g.band_px) {
                mask.at(x, y) = kEndothelium;
            }
        }
    }
    return mask;
}

// Two-level angular probability field: `high` over [0, fraction) turns,
// `low` elsewhere.
Image<std::uint16_t> rasterize_sector_map(const PhantomSpec& s, const Geometry& g,
                                          double fraction, double high, double low) {
    const std::uint16_t hi = ProbabilityMap::quantize(high);
    const std::uint16_t lo = ProbabilityMap::quantize(low);
    Image<std::uint16_t> map(s.width_px, s.height_px, lo);
    if (fraction <= 0.0) return map;
    for (int y = 0; y < s.height_px; ++y)
        for (int x = 0; x < s.width_px; ++x)
            if (turns_at(g, x, y) < fraction) map.at(x, y) = hi;
    return map;
}

bool box_fits(const LabelImage& mask, int x0, int y0, int w, int h, std::uint8_t label) {
    if (x0 < 0 || y0 < 0 || x0 + w > mask.width() || y0 + h > mask.height())
        return false;
    for (int y = y0; y < y0 + h; ++y)
        for (int x = x0; x < x0 + w; ++x)
            if (mask.at(x, y) != label) return false;
    return true;
}

std::vector<DetectionBox> plant_boxes(const PhantomSpec& s, const Geometry& g,
                                      const LabelImage& mask, std::mt19937_64& rng) {
    std::vector<DetectionBox> boxes;
    std::uniform_real_distribution<double> angle(0.0, kTwoPi);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    for (const PlantedEdd& plant : s.planted_edd) {
        std::uint8_t label = kMesangium;
        switch (plant.location) {
            case EddLocation::kSubepithelial: label = kPodocyte; break;
            case EddLocation::kIntramembranous: label = kGbm; break;
            case EddLocation::kSubendothelial: label = kEndothelium; break;
            case EddLocation::kMesangial: label = kMesangium; break;
        }
        for (int i = 0; i < plant.count; ++i) {
            bool placed = false;
            for (int attempt = 0; attempt < 4000 && !placed; ++attempt) {
                double px, py;
                if (plant.location == EddLocation::kMesangial) {
                    const double rr = g.mes_r_px * std::sqrt(unit(rng));
                    const double th = angle(rng);
                    px = g.cx + rr * std::cos(th);
                    py = g.cy + rr * std::sin(th);
                } else {
                    double rho = g.r_px;  // band mid-lines
                    const double th = angle(rng);
                    const double half = g.half_at(th);
                    if (plant.location == EddLocation::kSubepithelial)
                        rho = g.r_px + half + g.band_px / 2.0;
                    else if (plant.location == EddLocation::kSubendothelial)
                        rho = g.r_px - half - g.band_px / 2.0;
                    px = g.cx + rho * std::cos(th);
                    py = g.cy + rho * std::sin(th);
                }
                const int x0 = round_to_px(px) - plant.box_w_px / 2;
                const int y0 = round_to_px(py) - plant.box_h_px / 2;
                if (box_fits(mask, x0, y0, plant.box_w_px, plant.box_h_px, label)) {
                    boxes.push_back({double(x0), double(y0),
                                     double(x0 + plant.box_w_px),
                                     double(y0 + plant.box_h_px),
                                     s.detection_confidence});
                    placed = true;
                }
            }
            if (!placed)
                throw SpecInfeasibleError(
                    std::string("cannot place a ") + std::to_string(plant.box_w_px) +
                    "x" + std::to_string(plant.box_h_px) + " box inside the " +
                    to_string(plant.location) + " compartment");
        }
    }
    return boxes;
}

}  // namespace

std::pair<CaseRecord, PhantomGroundTruth> generate_phantom(const PhantomSpec& spec) {
    if (spec.n_images < 1) throw SpecInfeasibleError("n_images must be >= 1");
    if (spec.width_px < 32 || spec.height_px < 32)
        throw SpecInfeasibleError("phantom dims must be at least 32 px");
    if (spec.nm_per_pixel <= 0.0) throw SpecInfeasibleError("nm_per_pixel must be positive");
    if (nm_to_px(spec.width_nm, spec.nm_per_pixel) < 4.0)
        throw SpecInfeasibleError("GBM width must span at least 4 px at this scale");
    if (spec.fused_fraction < 0.0 || spec.fused_fraction > 1.0)
        throw SpecInfeasibleError("fused_fraction must lie in [0,1]");

    const Geometry g = make_geometry(spec);
    const double outer = g.r_px * (1.0 + 0.0) + g.half_px * (1.0 + g.mod_amp) + g.band_px;
    if (g.cx - outer < 0 || g.cy - outer < 0)
        throw SpecInfeasibleError("loop plus bands does not fit inside the image");
    if (g.mes_r_px >= g.r_px - g.half_px * (1.0 + g.mod_amp) - g.band_px)
        throw SpecInfeasibleError("mesangial disc overlaps the endothelium band");

    std::mt19937_64 rng(spec.seed);

    CaseRecord record;
    record.case_id = spec.case_id;
    PhantomGroundTruth gt;
    gt.true_width_nm = spec.width_nm;
    gt.width_modulation_amplitude = spec.width_modulation_amplitude;
    gt.width_modulation_periods = spec.width_modulation_periods;
    gt.fused_fraction = spec.fused_fraction;
    gt.expected_r_fpe =
        spec.p_fused * spec.fused_fraction + spec.p_intact * (1.0 - spec.fused_fraction);
    gt.radius_nm = spec.radius_nm;
    gt.nm_per_pixel = spec.nm_per_pixel;
    gt.n_images = spec.n_images;
    gt.seed = spec.seed;

    const LabelImage mask = rasterize_mask(spec, g);
    const Image<std::uint16_t> p_mea_raw = rasterize_sector_map(
        spec, g, spec.unsuitable_fraction, spec.p_unsuitable, spec.p_suitable);
    const Image<std::uint16_t> p_fpe_raw = rasterize_sector_map(
        spec, g, spec.fused_fraction, spec.p_fused, spec.p_intact);

    for (int i = 0; i < spec.n_images; ++i) {
        ImageRecord img;
        img.meta.image_id = spec.case_id + "_img" + std::to_string(i);
        img.meta.width_px = spec.width_px;
        img.meta.height_px = spec.height_px;
        img.meta.nm_per_pixel = spec.nm_per_pixel;
        img.mask = mask;
        img.p_mea = ProbabilityMap(p_mea_raw, ProbKind::kMeasurementSuitability);
        img.p_fpe = ProbabilityMap(p_fpe_raw, ProbKind::kFpe);
        img.detections = plant_boxes(spec, g, mask, rng);
        record.images.push_back(std::move(img));
    }

    // Planted areas: per image, each plant contributes count * w * h pixels.
    for (int i = 0; i < spec.n_images; ++i)
        for (const PlantedEdd& plant : spec.planted_edd)
            gt.planted_areas_um2.by(plant.location) += to_physical_area_um2(
                double(plant.count) * plant.box_w_px * plant.box_h_px, spec.nm_per_pixel);

    return {std::move(record), gt};
}

PhantomGroundTruth generate_phantom_case(const PhantomSpec& spec,
                                         const std::filesystem::path& out_dir) {
    auto [record, gt] = generate_phantom(spec);
    save_case(record, out_dir);
    std::ofstream out(out_dir / "ground_truth.json");
    if (!out) throw Error("cannot write " + (out_dir / "ground_truth.json").string());
    out << gt.to_json().dump(2) << '\n';
    return gt;
}

json PhantomSpec::to_json() const {
    json planted = json::array();
    for (const PlantedEdd& p : planted_edd)
        planted.push_back({{"location", to_string(p.location)},
                           {"box_w_px", p.box_w_px},
                           {"box_h_px", p.box_h_px},
                           {"count", p.count}});
    return {{"case_id", case_id},
            {"n_images", n_images},
            {"width_px", width_px},
            {"height_px", height_px},
            {"nm_per_pixel", nm_per_pixel},
            {"radius_nm", radius_nm},
            {"width_nm", width_nm},
            {"width_modulation_amplitude", width_modulation_amplitude},
            {"width_modulation_periods", width_modulation_periods},
            {"band_nm", band_nm},
            {"mesangium_radius_nm", mesangium_radius_nm},
            {"fused_fraction", fused_fraction},
            {"p_fused", p_fused},
            {"p_intact", p_intact},
            {"p_suitable", p_suitable},
            {"p_unsuitable", p_unsuitable},
            {"unsuitable_fraction", unsuitable_fraction},
            {"planted_edd", planted},
            {"detection_confidence", detection_confidence},
            {"seed", seed}};
}

PhantomSpec PhantomSpec::from_json(const json& j) {
    PhantomSpec s;
    auto opt = [&](const char* key, auto& field) {
        if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    opt("case_id", s.case_id);
    opt("n_images", s.n_images);
    opt("width_px", s.width_px);
    opt("height_px", s.height_px);
    opt("nm_per_pixel", s.nm_per_pixel);
    opt("radius_nm", s.radius_nm);
    opt("width_nm", s.width_nm);
    opt("width_modulation_amplitude", s.width_modulation_amplitude);
    opt("width_modulation_periods", s.width_modulation_periods);
    opt("band_nm", s.band_nm);
    opt("mesangium_radius_nm", s.mesangium_radius_nm);
    opt("fused_fraction", s.fused_fraction);
    opt("p_fused", s.p_fused);
    opt("p_intact", s.p_intact);
    opt("p_suitable", s.p_suitable);
    opt("p_unsuitable", s.p_unsuitable);
    opt("unsuitable_fraction", s.unsuitable_fraction);
    opt("detection_confidence", s.detection_confidence);
    opt("seed", s.seed);
    if (j.contains("planted_edd")) {
        for (const json& pj : j.at("planted_edd")) {
            PlantedEdd p;
            const std::string loc = pj.at("location").get<std::string>();
            if (loc == "subepithelial") p.location = EddLocation::kSubepithelial;
            else if (loc == "intramembranous") p.location = EddLocation::kIntramembranous;
            else if (loc == "subendothelial") p.location = EddLocation::kSubendothelial;
            else if (loc == "mesangial") p.location = EddLocation::kMesangial;
            else throw Error("unknown planted_edd location '" + loc + "'");
            p.box_w_px = pj.at("box_w_px").get<int>();
            p.box_h_px = pj.at("box_h_px").get<int>();
            p.count = pj.at("count").get<int>();
            s.planted_edd.push_back(p);
        }
    }
    return s;
}

json PhantomGroundTruth::to_json() const {
    return {{"true_width_nm", true_width_nm},
            {"width_modulation_amplitude", width_modulation_amplitude},
            {"width_modulation_periods", width_modulation_periods},
            {"fused_fraction", fused_fraction},
            {"expected_r_fpe", expected_r_fpe},
            {"planted_areas_um2",
             {{"subepithelial", planted_areas_um2.subepithelial},
              {"intramembranous", planted_areas_um2.intramembranous},
              {"subendothelial", planted_areas_um2.subendothelial},
              {"mesangial", planted_areas_um2.mesangial}}},
            {"radius_nm", radius_nm},
            {"nm_per_pixel", nm_per_pixel},
            {"n_images", n_images},
            {"seed", seed}};
}

PhantomGroundTruth PhantomGroundTruth::from_json(const json& j) {
    PhantomGroundTruth gt;
    gt.true_width_nm = j.at("true_width_nm").get<double>();
    gt.width_modulation_amplitude = j.value("width_modulation_amplitude", 0.0);
    gt.width_modulation_periods = j.value("width_modulation_periods", 0);
    gt.fused_fraction = j.at("fused_fraction").get<double>();
    gt.expected_r_fpe = j.at("expected_r_fpe").get<double>();
    const json& a = j.at("planted_areas_um2");
    gt.planted_areas_um2.subepithelial = a.at("subepithelial").get<double>();
    gt.planted_areas_um2.intramembranous = a.at("intramembranous").get<double>();
    gt.planted_areas_um2.subendothelial = a.at("subendothelial").get<double>();
    gt.planted_areas_um2.mesangial = a.at("mesangial").get<double>();
    gt.radius_nm = j.value("radius_nm", 0.0);
    gt.nm_per_pixel = j.value("nm_per_pixel", 0.0);
    gt.n_images = j.value("n_images", 1);
    gt.seed = j.value("seed", std::uint64_t{0});
    return gt;
}

}  // namespace glomorph
