#include "mkdv/io.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "json.hpp"

#include "mkdv/errors.hpp"
#include "mkdv/scattering.hpp"
#include "mkdv/special.hpp"

namespace mkdv {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_csv(const ReflectionTable& table, std::ostream& os) {
    os << "z,re_r,im_r\n";
    for (std::size_t i = 0; i < table.size(); ++i) {
        os << format_double(table.z_grid[i]) << ',' << format_double(table.r_values[i].real())
           << ',' << format_double(table.r_values[i].imag()) << '\n';
    }
}

ReflectionTable read_reflection_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != "z,re_r,im_r")
        throw IoError("reflection csv: missing or unexpected header");
    std::vector<double> zs;
    std::vector<std::complex<double>> rs;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        double z, re, im;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &z, &re, &im) != 3)
            throw IoError("reflection csv: malformed row: " + line);
        zs.push_back(z);
        rs.push_back({re, im});
    }
    if (zs.size() < 3 || zs.size() % 2 == 0)
        throw IoError("reflection csv: need an odd number of symmetric samples");
    const double dz = zs[1] - zs[0];
    const double z_max = zs.back();
    auto table = make_reflection_table(z_max, dz, std::move(rs));
    for (std::size_t i = 0; i < zs.size(); ++i) {
        if (std::abs(zs[i] - table.z_grid[i]) > 1e-9)
            throw IoError("reflection csv: grid is not uniform-symmetric");
    }
    return table;
}

void write_json(const ReflectionTable& table, std::ostream& os) {
    nlohmann::json j;
    j["z_max"] = table.z_max;
    j["dz"] = table.dz;
    j["n"] = table.size();
    j["interpolation"] = "cubic";
    j["max_unitarity_residual"] = table.max_unitarity_residual;
    auto& samples = j["samples"] = nlohmann::json::array();
    for (std::size_t i = 0; i < table.size(); ++i) {
        samples.push_back({table.z_grid[i], table.r_values[i].real(), table.r_values[i].imag()});
    }
    os << j.dump(2) << '\n';
}

ReflectionTable read_reflection_json(std::istream& is) {
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("reflection json: ") + e.what());
    }
    const double z_max = j.at("z_max").get<double>();
    const double dz = j.at("dz").get<double>();
    std::vector<std::complex<double>> rs;
    for (const auto& row : j.at("samples")) {
        rs.push_back({row.at(1).get<double>(), row.at(2).get<double>()});
    }
    auto table = make_reflection_table(z_max, dz, std::move(rs));
    if (j.contains("max_unitarity_residual"))
        table.max_unitarity_residual = j["max_unitarity_residual"].get<double>();
    return table;
}

void write_csv(const PainleveSolution& sol, std::ostream& os) {
    os << "s,P,P_prime\n";
    for (std::size_t i = 0; i < sol.size(); ++i) {
        os << format_double(sol.s_grid[i]) << ',' << format_double(sol.p[i]) << ','
           << format_double(sol.p_prime[i]) << '\n';
    }
}

} // namespace mkdv
