#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "glomorph/case_io.hpp"
#include "glomorph/centerline.hpp"
#include "glomorph/phantom.hpp"
#include "glomorph/pipeline.hpp"
#include "glomorph/skeleton.hpp"
#include "glomorph/stats.hpp"
#include "glomorph/units.hpp"

namespace py = pybind11;
using nlohmann::json;
using namespace glomorph;

namespace {

py::object json_to_py(const json& j) {
    switch (j.type()) {
        case json::value_t::null: return py::none();
        case json::value_t::boolean: return py::bool_(j.get<bool>());
        case json::value_t::number_integer: return py::int_(j.get<long long>());
        case json::value_t::number_unsigned: return py::int_(j.get<unsigned long long>());
        case json::value_t::number_float: return py::float_(j.get<double>());
        case json::value_t::string: return py::str(j.get<std::string>());
        case json::value_t::array: {
            py::list out;
            for (const json& v : j) out.append(json_to_py(v));
            return out;
        }
        case json::value_t::object: {
            py::dict out;
            for (const auto& [k, v] : j.items()) out[py::str(k)] = json_to_py(v);
            return out;
        }
        default: return py::none();
    }
}

json py_to_json(const py::handle& obj) {
    if (obj.is_none()) return nullptr;
    if (py::isinstance<py::bool_>(obj)) return obj.cast<bool>();
    if (py::isinstance<py::int_>(obj)) return obj.cast<long long>();
    if (py::isinstance<py::float_>(obj)) return obj.cast<double>();
    if (py::isinstance<py::str>(obj)) return obj.cast<std::string>();
    if (py::isinstance<py::dict>(obj)) {
        json out = json::object();
        for (const auto& item : obj.cast<py::dict>())
            out[item.first.cast<std::string>()] = py_to_json(item.second);
        return out;
    }
    if (py::isinstance<py::list>(obj) || py::isinstance<py::tuple>(obj)) {
        json out = json::array();
        for (const auto& item : obj.cast<py::sequence>()) out.push_back(py_to_json(item));
        return out;
    }
    throw py::type_error("cannot convert object to JSON");
}

LabelImage mask_from_array(const py::array_t<std::uint8_t, py::array::c_style>& arr) {
    if (arr.ndim() != 2) throw py::value_error("mask must be a 2-D uint8 array");
    LabelImage mask(static_cast<int>(arr.shape(1)), static_cast<int>(arr.shape(0)));
    std::memcpy(mask.pixels().data(), arr.data(), arr.size());
    return mask;
}

py::array_t<std::uint8_t> array_from_image(const Image<std::uint8_t>& img) {
    py::array_t<std::uint8_t> arr({img.height(), img.width()});
    std::memcpy(arr.mutable_data(), img.pixels().data(), img.pixels().size());
    return arr;
}

PipelineConfig config_from_obj(const py::object& config) {
    if (config.is_none()) return PipelineConfig{};
    return PipelineConfig::from_json(py_to_json(config));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Glomerular TEM morphometry core (GBM thickness, FPE degree, "
              "EDD location)";

    m.def("to_physical_area", &to_physical_area_um2, py::arg("px_area"),
          py::arg("nm_per_pixel"),
          "Convert a pixel area to um^2 at the given scale.");

    m.def("default_config",
          [] { return json_to_py(PipelineConfig{}.to_json()); },
          "Pipeline defaults as a dict (the schema accepted by `config=`).");

    m.def(
        "skeletonize",
        [](const py::array_t<std::uint8_t, py::array::c_style>& mask) {
            return array_from_image(skeletonize_gbm(mask_from_array(mask)));
        },
        py::arg("mask"),
        "Thin the GBM label (1) of a 2-D uint8 mask to a one-pixel-wide "
        "skeleton; returns a 0/1 uint8 array.");

    m.def(
        "extract_centerline",
        [](const py::array_t<std::uint8_t, py::array::c_style>& mask,
           double nm_per_pixel, double min_branch_nm) {
            const LabelImage label_mask = mask_from_array(mask);
            const auto skeleton = skeletonize_gbm(label_mask);
            const Centerline cl = order_and_prune(skeleton, min_branch_nm, nm_per_pixel);
            py::list out;
            for (const Polyline& pl : cl.polylines) {
                py::array_t<double> pts({static_cast<py::ssize_t>(pl.points.size()),
                                         py::ssize_t(2)});
                auto view = pts.mutable_unchecked<2>();
                for (py::ssize_t i = 0; i < view.shape(0); ++i) {
                    view(i, 0) = pl.points[static_cast<std::size_t>(i)].x;
                    view(i, 1) = pl.points[static_cast<std::size_t>(i)].y;
                }
                py::dict entry;
                entry["points"] = pts;  // (x, y) rows
                entry["closed"] = pl.closed;
                entry["length_px"] = pl.length_px();
                out.append(entry);
            }
            return out;
        },
        py::arg("mask"), py::arg("nm_per_pixel") = 10.0,
        py::arg("min_branch_nm") = 300.0,
        "Skeletonize the GBM label and return ordered centerline polylines.");

    m.def(
        "process_case",
        [](const std::string& manifest, const py::object& config,
           const py::object& out_dir, int workers, bool render) {
            ProcessOptions options;
            options.workers = workers;
            options.render = render;
            if (!out_dir.is_none())
                options.out_dir = std::filesystem::path(out_dir.cast<std::string>());
            const PipelineConfig cfg = config_from_obj(config);
            CaseQuantification result;
            {
                py::gil_scoped_release release;
                result = process_case(std::filesystem::path(manifest), cfg, options);
            }
            return json_to_py(case_report_json(result, cfg));
        },
        py::arg("manifest"), py::arg("config") = py::none(),
        py::arg("out_dir") = py::none(), py::arg("workers") = 0,
        py::arg("render") = false,
        "Run the full quantification over a case manifest; returns the report "
        "as a dict (and writes report.json plus overlays when out_dir is set).");

    m.def(
        "generate_phantom",
        [](const py::object& spec, const std::string& out_dir) {
            const PhantomSpec ps = PhantomSpec::from_json(py_to_json(spec));
            PhantomGroundTruth gt;
            {
                py::gil_scoped_release release;
                gt = generate_phantom_case(ps, out_dir);
            }
            py::dict out;
            out["manifest"] = (std::filesystem::path(out_dir) / "manifest.json").string();
            out["ground_truth"] = json_to_py(gt.to_json());
            return out;
        },
        py::arg("spec"), py::arg("out_dir"),
        "Generate a synthetic ground-truth case on disk; returns the manifest "
        "path and ground truth dict.");

    m.def(
        "ks_two_sample",
        [](const std::vector<double>& a, const std::vector<double>& b) {
            const auto r = stats::ks_two_sample(a, b);
            return py::make_tuple(r.d, r.p);
        },
        py::arg("a"), py::arg("b"),
        "Two-sample Kolmogorov-Smirnov statistic and asymptotic p-value.");

    m.def("pearson", &stats::pearson, py::arg("a"), py::arg("b"));

    m.def(
        "bland_altman",
        [](const std::vector<double>& a, const std::vector<double>& b) {
            const auto r = stats::bland_altman(a, b);
            py::dict out;
            out["mean_diff"] = r.mean_diff;
            out["loa_low"] = r.loa_low;
            out["loa_high"] = r.loa_high;
            out["pct_within"] = r.pct_within;
            out["degenerate"] = r.degenerate;
            return out;
        },
        py::arg("a"), py::arg("b"));

    m.def(
        "roc_auc",
        [](const std::vector<double>& scores, const std::vector<bool>& labels) {
            const auto curve = stats::roc_auc(scores, labels);
            py::dict out;
            out["auc"] = curve.auc;
            py::list pts;
            for (const auto& [fpr, tpr] : curve.points)
                pts.append(py::make_tuple(fpr, tpr));
            out["points"] = pts;
            return out;
        },
        py::arg("scores"), py::arg("labels"));

#ifdef VERSION_INFO
#define GLOMORPH_STR(x) #x
#define GLOMORPH_XSTR(x) GLOMORPH_STR(x)
    m.attr("__version__") = GLOMORPH_XSTR(VERSION_INFO);
#else
    m.attr("__version__") = "0.1.0";
#endif
}
