#include "optctl/agent/pricing.hpp"

#include <fstream>

#include "optctl/sim/error.hpp"

namespace optctl::agent {

PriceTable PriceTable::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ToolError(errc::config_invalid, "cannot open endpoint config '" + path + "'");
    }
    nlohmann::json j;
    in >> j;
    return from_json(j);
}

PriceTable PriceTable::from_json(const nlohmann::json& j) {
    PriceTable t;
    for (const auto& [model, row] : j.value("prices", nlohmann::json::object()).items()) {
        PriceRow r;
        r.model = model;
        r.input_per_1m = row.at("input_per_1m").get<double>();
        r.output_per_1m = row.at("output_per_1m").get<double>();
        t.rows_.push_back(r);
    }
    return t;
}

const PriceRow* PriceTable::find(const std::string& model) const {
    for (const auto& r : rows_) {
        if (r.model == model) return &r;
    }
    return nullptr;
}

}  // namespace optctl::agent
