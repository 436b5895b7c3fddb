#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "optctl/sim/edfa.hpp"
#include "optctl/sim/wss.hpp"

namespace optctl::sim {

// One stage of the optical path, walked in order by propagate().
struct Element {
    enum class Kind { transmitter, wss, edfa, fiber_span, tap, receiver, osa };

    Kind kind = Kind::transmitter;
    std::string device_id;                  // transmitter / wss / edfa / receiver / osa
    WssSide side = WssSide::mux;            // wss
    EdfaModule module = EdfaModule::booster;  // edfa
    double length_km = 0.0;                 // fiber_span
    double loss_db_per_km = 0.2;            // fiber_span
    double tap_ratio_db = 20.0;             // tap (monitor path loss)
};

struct Topology {
    std::vector<Element> elements;

    static Topology from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

std::string to_string(Element::Kind k);

}  // namespace optctl::sim
