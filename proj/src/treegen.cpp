#include "lt/treegen.hpp"

#include <json.hpp>

namespace lt {

std::string trace_json_line(const TraceEntry& e) {
    nlohmann::ordered_json j;
    j["step"] = e.step;
    j["frontier"] = e.frontier;
    j["fired"] = e.fired;
    return j.dump();
}

}  // namespace lt
