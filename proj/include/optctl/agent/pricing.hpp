#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace optctl::agent {

struct PriceRow {
    std::string model;
    double input_per_1m = 0.0;
    double output_per_1m = 0.0;
};

// The price table section of the endpoint config file.
class PriceTable {
public:
    static PriceTable from_file(const std::string& path);
    static PriceTable from_json(const nlohmann::json& j);

    const std::vector<PriceRow>& rows() const { return rows_; }
    const PriceRow* find(const std::string& model) const;

private:
    std::vector<PriceRow> rows_;
};

}  // namespace optctl::agent
