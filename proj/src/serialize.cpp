#include "cmvkit/serialize.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cmvkit/errors.hpp"

namespace cmv {

using nlohmann::json;

namespace {

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw io_error("expected a complex scalar as [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

json parse(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw io_error(std::string("JSON parse error: ") + e.what());
    }
}

}  // namespace

std::string to_json(const VerblunskyCoefficients& v) {
    json out;
    out["alphas"] = json::array();
    for (cplx a : v.alphas()) out["alphas"].push_back(complex_to_json(a));
    return out.dump(2) + "\n";
}

std::string to_json(const Matrix& m) {
    json out;
    out["rows"] = m.rows();
    out["cols"] = m.cols();
    out["data"] = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out["data"].push_back(complex_to_json(m(i, j)));
    return out.dump(2) + "\n";
}

std::string to_json(const SpectralMeasure& m) {
    json out;
    out["atoms"] = json::array();
    for (const Atom& a : m.atoms()) out["atoms"].push_back({{"theta", a.theta}, {"mass", a.mass}});
    return out.dump(2) + "\n";
}

VerblunskyCoefficients coefficients_from_json(const std::string& text) {
    const json j = parse(text);
    if (!j.contains("alphas") || !j["alphas"].is_array())
        throw io_error("coefficients: missing \"alphas\" array");
    cvector a;
    for (const json& e : j["alphas"]) a.push_back(complex_from_json(e));
    return VerblunskyCoefficients{std::move(a)};
}

Matrix matrix_from_json(const std::string& text) {
    const json j = parse(text);
    if (!j.contains("rows") || !j.contains("cols") || !j.contains("data"))
        throw io_error("matrix: missing \"rows\"/\"cols\"/\"data\"");
    const std::size_t rows = j["rows"].get<std::size_t>();
    const std::size_t cols = j["cols"].get<std::size_t>();
    if (!j["data"].is_array() || j["data"].size() != rows * cols)
        throw io_error("matrix: data length does not match rows*cols");
    Matrix m(rows, cols);
    std::size_t k = 0;
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t c = 0; c < cols; ++c) m(i, c) = complex_from_json(j["data"][k++]);
    return m;
}

SpectralMeasure measure_from_json(const std::string& text) {
    const json j = parse(text);
    if (!j.contains("atoms") || !j["atoms"].is_array())
        throw io_error("measure: missing \"atoms\" array");
    std::vector<Atom> atoms;
    for (const json& e : j["atoms"]) {
        if (!e.contains("theta") || !e.contains("mass"))
            throw io_error("measure: atom needs \"theta\" and \"mass\"");
        atoms.push_back({e["theta"].get<double>(), e["mass"].get<double>()});
    }
    return SpectralMeasure{std::move(atoms)};
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open " + path + " for writing");
    out << content;
    if (!out) throw io_error("write failed: " + path);
}

}  // namespace cmv
