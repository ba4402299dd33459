#include "homf/serialize.hpp"

#include <fstream>
#include <nlohmann/json.hpp>

namespace homf::serialize {

namespace {

json grid_to_json(const Grid2D& g) {
    return json{{"start1", g.start1}, {"step1", g.step1}, {"n1", g.n1},
                {"start2", g.start2}, {"step2", g.step2}, {"n2", g.n2}};
}

Grid2D grid_from_json(const json& j) {
    Grid2D g;
    g.start1 = j.at("start1").get<double>();
    g.step1 = j.at("step1").get<double>();
    g.n1 = j.at("n1").get<int>();
    g.start2 = j.at("start2").get<double>();
    g.step2 = j.at("step2").get<double>();
    g.n2 = j.at("n2").get<int>();
    g.validate();
    return g;
}

json grid1_to_json(const Grid1D& g) {
    return json{{"start", g.start}, {"step", g.step}, {"n", g.n}};
}

}  // namespace

json to_json(const spectra::JointAmplitude& ja) {
    json j;
    j["format"] = "homf-joint-amplitude";
    j["version"] = 1;
    j["domain"] = ja.domain() == spectra::Domain::frequency ? "frequency" : "time";
    j["grid"] = grid_to_json(ja.grid());
    json values = json::array();
    for (int i = 0; i < ja.grid().n1; ++i)
        for (int k = 0; k < ja.grid().n2; ++k) {
            const auto v = ja.values()(i, k);
            values.push_back(json::array({v.real(), v.imag()}));
        }
    j["values"] = std::move(values);
    return j;
}

spectra::JointAmplitude amplitude_from_json(const json& j) {
    if (j.value("format", "") != "homf-joint-amplitude")
        fail(errc::invalid_params, "not a homf-joint-amplitude document");
    const std::string domain = j.at("domain").get<std::string>();
    if (domain != "frequency" && domain != "time")
        fail(errc::invalid_params, "domain must be 'frequency' or 'time'");
    const Grid2D g = grid_from_json(j.at("grid"));
    const auto& values = j.at("values");
    if (static_cast<int>(values.size()) != g.n1 * g.n2)
        fail(errc::invalid_params, "value count does not match grid shape");
    spectra::MatrixXcd m(g.n1, g.n2);
    int idx = 0;
    for (int i = 0; i < g.n1; ++i)
        for (int k = 0; k < g.n2; ++k, ++idx) {
            const auto& pair = values.at(idx);
            m(i, k) = spectra::complexd(pair.at(0).get<double>(),
                                        pair.at(1).get<double>());
        }
    spectra::JointAmplitude ja(g, std::move(m),
                               domain == "frequency" ? spectra::Domain::frequency
                                                     : spectra::Domain::time);
    ja.require_finite();
    return ja;
}

json to_json(const timeresolved::ClickDistribution& cd) {
    json j;
    j["format"] = "homf-click-distribution";
    j["version"] = 1;
    j["p0"] = cd.p0;
    j["time_grid"] = grid1_to_json(cd.time_grid);
    j["p1"] = std::vector<double>(cd.p1.data(), cd.p1.data() + cd.p1.size());
    j["p2"] = std::vector<double>(cd.p2.data(), cd.p2.data() + cd.p2.size());
    json rows = json::array();
    for (int i = 0; i < cd.p12.rows(); ++i) {
        json row = json::array();
        for (int k = 0; k < cd.p12.cols(); ++k) row.push_back(cd.p12(i, k));
        rows.push_back(std::move(row));
    }
    j["p12"] = std::move(rows);
    j["masses"] = json{{"p1", cd.mass_p1()},
                       {"p2", cd.mass_p2()},
                       {"p12", cd.mass_p12()},
                       {"total", cd.total()}};
    return j;
}

void save_json(const json& j, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(errc::io_error, "cannot open " + path + " for writing");
    out << j.dump(2) << "\n";
    if (!out) fail(errc::io_error, "failed writing " + path);
}

json load_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(errc::io_error, "cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        fail(errc::io_error, std::string("JSON parse failure: ") + e.what());
    }
    return j;
}

}  // namespace homf::serialize
