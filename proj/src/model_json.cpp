#include "gmfit/model_json.hpp"

#include "gmfit/errors.hpp"

#include <json.hpp>

namespace gmfit {

using nlohmann::json;

std::string model_to_json(const MixtureModel& model) {
    json components = json::array();
    for (const auto& c : model.components()) {
        components.push_back({{"weight", c.weight}, {"mean", c.mean}, {"std", c.std}});
    }
    return json{{"components", components}}.dump(2) + "\n";
}

MixtureModel model_from_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw DomainError(std::string("malformed model JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("components") || !doc["components"].is_array()) {
        throw DomainError("model JSON must be an object with a \"components\" array");
    }
    std::vector<GaussianComponent> components;
    std::size_t index = 0;
    for (const auto& entry : doc["components"]) {
        ++index;
        const auto field = [&](const char* name) {
            if (!entry.is_object() || !entry.contains(name) || !entry[name].is_number()) {
                throw DomainError("component " + std::to_string(index) + ": missing numeric \"" +
                                  name + "\"");
            }
            return entry[name].get<double>();
        };
        components.push_back({field("weight"), field("mean"), field("std")});
    }
    return MixtureModel(std::move(components));
}

}  // namespace gmfit
