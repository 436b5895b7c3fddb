#include "optctl/sim/topology.hpp"

#include "optctl/sim/error.hpp"

namespace optctl::sim {

std::string to_string(Element::Kind k) {
    switch (k) {
        case Element::Kind::transmitter: return "transmitter";
        case Element::Kind::wss: return "wss";
        case Element::Kind::edfa: return "edfa";
        case Element::Kind::fiber_span: return "fiber_span";
        case Element::Kind::tap: return "tap";
        case Element::Kind::receiver: return "receiver";
        case Element::Kind::osa: return "osa";
    }
    return "transmitter";
}

namespace {
Element::Kind element_kind_from_string(const std::string& s) {
    if (s == "transmitter") return Element::Kind::transmitter;
    if (s == "wss") return Element::Kind::wss;
    if (s == "edfa") return Element::Kind::edfa;
    if (s == "fiber_span") return Element::Kind::fiber_span;
    if (s == "tap") return Element::Kind::tap;
    if (s == "receiver") return Element::Kind::receiver;
    if (s == "osa") return Element::Kind::osa;
    throw ToolError(errc::config_invalid, "unknown topology element type '" + s + "'");
}
}  // namespace

Topology Topology::from_json(const nlohmann::json& j) {
    Topology t;
    for (const auto& ej : j) {
        Element e;
        e.kind = element_kind_from_string(ej.at("type").get<std::string>());
        switch (e.kind) {
            case Element::Kind::transmitter:
            case Element::Kind::receiver:
                e.device_id = ej.at("device").get<std::string>();
                break;
            case Element::Kind::wss:
                e.device_id = ej.at("device").get<std::string>();
                e.side = wss_side_from_string(ej.at("side").get<std::string>());
                break;
            case Element::Kind::edfa:
                e.device_id = ej.at("device").get<std::string>();
                e.module = edfa_module_from_string(ej.at("module").get<std::string>());
                break;
            case Element::Kind::fiber_span:
                e.length_km = ej.at("length_km").get<double>();
                e.loss_db_per_km = ej.value("loss_db_per_km", 0.2);
                if (e.length_km <= 0.0) {
                    throw ToolError(errc::config_invalid, "fiber span length must be > 0");
                }
                break;
            case Element::Kind::tap:
                e.tap_ratio_db = ej.value("ratio_db", 20.0);
                break;
            case Element::Kind::osa:
                e.device_id = ej.at("device").get<std::string>();
                break;
        }
        t.elements.push_back(e);
    }

    // Every OSA attachment sits behind exactly one monitor tap.
    for (size_t i = 0; i < t.elements.size(); ++i) {
        if (t.elements[i].kind == Element::Kind::osa) {
            if (i == 0 || t.elements[i - 1].kind != Element::Kind::tap) {
                throw ToolError(errc::config_invalid,
                                "osa element must be immediately preceded by a tap");
            }
        }
        if (t.elements[i].kind == Element::Kind::tap) {
            if (i + 1 >= t.elements.size() || t.elements[i + 1].kind != Element::Kind::osa) {
                throw ToolError(errc::config_invalid,
                                "tap element must be immediately followed by an osa");
            }
        }
    }
    return t;
}

nlohmann::json Topology::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : elements) {
        nlohmann::json ej;
        ej["type"] = to_string(e.kind);
        switch (e.kind) {
            case Element::Kind::transmitter:
            case Element::Kind::receiver:
            case Element::Kind::osa:
                ej["device"] = e.device_id;
                break;
            case Element::Kind::wss:
                ej["device"] = e.device_id;
                ej["side"] = to_string(e.side);
                break;
            case Element::Kind::edfa:
                ej["device"] = e.device_id;
                ej["module"] = to_string(e.module);
                break;
            case Element::Kind::fiber_span:
                ej["length_km"] = e.length_km;
                ej["loss_db_per_km"] = e.loss_db_per_km;
                break;
            case Element::Kind::tap:
                ej["ratio_db"] = e.tap_ratio_db;
                break;
        }
        arr.push_back(ej);
    }
    return arr;
}

}  // namespace optctl::sim
