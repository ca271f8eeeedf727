#include "mpsynth/transducer_io.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "mpsynth/errors.hpp"

namespace mpsynth {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string input_key(const Transducer& t, Valuation packed) {
    std::vector<std::string> names;
    for (size_t j = 0; j < t.inputs.size(); ++j)
        if ((packed >> j) & 1u) names.push_back(t.inputs[j]);
    std::sort(names.begin(), names.end());
    std::string out;
    for (size_t i = 0; i < names.size(); ++i) {
        if (i) out += ' ';
        out += names[i];
    }
    return out;
}

}  // namespace

std::string transducer_to_json(const Transducer& t) {
    ordered_json j;
    j["inputs"] = t.inputs;
    j["outputs"] = t.outputs;
    j["initial"] = t.initial;
    ordered_json states = ordered_json::array();
    for (uint32_t q = 0; q < t.states.size(); ++q) {
        ordered_json s;
        s["id"] = q;
        if (t.is_done(q)) {
            s["output"] = "done";
        } else {
            ordered_json out;
            for (size_t jbit = 0; jbit < t.outputs.size(); ++jbit)
                out[t.outputs[jbit]] = ((*t.states[q].output >> jbit) & 1u) != 0;
            s["output"] = out;
            ordered_json next;
            for (Valuation x = 0; x < t.states[q].next.size(); ++x) {
                if (t.states[q].next[x] == UINT32_MAX) continue;
                next[input_key(t, x)] = t.states[q].next[x];
            }
            s["next"] = next;
        }
        states.push_back(s);
    }
    j["states"] = states;
    return j.dump(2) + "\n";
}

Transducer transducer_from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw ParseError(std::string("invalid transducer JSON: ") + e.what());
    }
    Transducer t;
    try {
        t.inputs = j.at("inputs").get<std::vector<std::string>>();
        t.outputs = j.at("outputs").get<std::vector<std::string>>();
        t.initial = j.at("initial").get<uint32_t>();
        const auto& states = j.at("states");
        t.states.resize(states.size());
        for (const auto& s : states) {
            uint32_t id = s.at("id").get<uint32_t>();
            if (id >= t.states.size())
                throw ParseError("transducer state id out of range");
            Transducer::State& st = t.states[id];
            const auto& output = s.at("output");
            if (output.is_string()) {
                if (output.get<std::string>() != "done")
                    throw ParseError("transducer output must be an object or \"done\"");
                continue;
            }
            Valuation out = 0;
            for (size_t jbit = 0; jbit < t.outputs.size(); ++jbit) {
                if (output.contains(t.outputs[jbit]) &&
                    output.at(t.outputs[jbit]).get<bool>())
                    out |= 1u << jbit;
            }
            st.output = out;
            st.next.assign(1u << t.inputs.size(), UINT32_MAX);
            for (const auto& [key, value] : s.at("next").items()) {
                Valuation x = 0;
                std::istringstream is(key);
                std::string atom;
                while (is >> atom) {
                    auto it = std::find(t.inputs.begin(), t.inputs.end(), atom);
                    if (it == t.inputs.end())
                        throw ParseError("unknown input atom '" + atom +
                                         "' in transducer");
                    x |= 1u << (it - t.inputs.begin());
                }
                st.next[x] = value.get<uint32_t>();
            }
        }
    } catch (const ordered_json::exception& e) {
        throw ParseError(std::string("malformed transducer JSON: ") + e.what());
    }
    return t;
}

std::string transducer_to_dot(const Transducer& t) {
    std::ostringstream os;
    os << "digraph transducer {\n  rankdir=LR;\n";
    os << "  init [shape=point];\n  init -> q" << t.initial << ";\n";
    for (uint32_t q = 0; q < t.states.size(); ++q) {
        if (t.is_done(q)) {
            os << "  q" << q << " [label=\"done\", shape=doublecircle];\n";
            continue;
        }
        std::string label = "q" + std::to_string(q) + "\\nY=";
        bool first = true;
        label += "{";
        for (size_t j = 0; j < t.outputs.size(); ++j) {
            if (!((*t.states[q].output >> j) & 1u)) continue;
            if (!first) label += ",";
            label += t.outputs[j];
            first = false;
        }
        label += "}";
        os << "  q" << q << " [label=\"" << label << "\", shape=box];\n";
        for (Valuation x = 0; x < t.states[q].next.size(); ++x) {
            if (t.states[q].next[x] == UINT32_MAX) continue;
            std::string key = input_key(t, x);
            os << "  q" << q << " -> q" << t.states[q].next[x] << " [label=\""
               << (key.empty() ? "{}" : key) << "\"];\n";
        }
    }
    os << "}\n";
    return os.str();
}

} // namespace mpsynth
