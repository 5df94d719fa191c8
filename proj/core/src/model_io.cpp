#include <fstream>

#include <json.hpp>

#include "striae/densities.hpp"
#include "striae/errors.hpp"

namespace striae {

namespace {

nlohmann::ordered_json model_to_json(const ScoreDensities& model) {
    nlohmann::ordered_json j;
    j["mode"] = to_string(model.mode);
    j["km"] = {{"alpha", model.km_fit.alpha},
               {"beta", model.km_fit.beta},
               {"sample_mean", model.km_fit.sample_mean},
               {"sample_var", model.km_fit.sample_var}};
    j["knm"] = {{"alpha", model.knm_fit.alpha},
                {"beta", model.knm_fit.beta},
                {"sample_mean", model.knm_fit.sample_mean},
                {"sample_var", model.knm_fit.sample_var}};
    j["threshold"] = model.threshold;
    j["n_km"] = model.n_km;
    j["n_knm"] = model.n_knm;
    j["seed"] = model.seed;
    return j;
}

BetaFit fit_from_json(const nlohmann::json& j, const std::string& which) {
    if (!j.contains("alpha") || !j.contains("beta")) {
        throw format_error("model json: '" + which + "' needs alpha and beta");
    }
    BetaFit fit;
    fit.alpha = j.at("alpha").get<double>();
    fit.beta = j.at("beta").get<double>();
    fit.sample_mean = j.value("sample_mean", fit.mean());
    fit.sample_var = j.value("sample_var", fit.variance());
    if (!(fit.alpha > 0.0) || !(fit.beta > 0.0)) {
        throw format_error("model json: '" + which + "' parameters must be positive");
    }
    return fit;
}

} // namespace

void write_model_json(const ScoreDensities& model, std::ostream& out) {
    out << model_to_json(model).dump(2) << '\n';
}

ScoreDensities read_model_json(std::istream& in, const std::string& name) {
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw format_error(name + ": invalid model json: " + e.what());
    }
    ScoreDensities model;
    try {
        model.mode = sample_mode_from_string(j.at("mode").get<std::string>());
        model.km_fit = fit_from_json(j.at("km"), "km");
        model.knm_fit = fit_from_json(j.at("knm"), "knm");
        model.threshold = j.at("threshold").get<double>();
        model.n_km = j.value("n_km", std::size_t{0});
        model.n_knm = j.value("n_knm", std::size_t{0});
        model.seed = j.value("seed", std::uint64_t{0});
    } catch (const nlohmann::json::exception& e) {
        throw format_error(name + ": incomplete model json: " + e.what());
    }
    if (!(model.threshold > 0.0 && model.threshold < 1.0)) {
        throw format_error(name + ": model threshold must lie in (0,1)");
    }
    return model;
}

void save_model(const ScoreDensities& model, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open model file for writing: " + path.string());
    write_model_json(model, out);
    out.flush();
    if (!out) throw io_error("write failed: " + path.string());
}

ScoreDensities load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open model file: " + path.string());
    return read_model_json(in, path.string());
}

} // namespace striae
