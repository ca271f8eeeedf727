#pragma once

#include <string>

#include "mpsynth/explicit_solver.hpp"

namespace mpsynth {

/// Transducer JSON schema (bit-exact, golden-tested):
///   {"inputs":[...],"outputs":[...],"initial":id,
///    "states":[{"id":N,"output":{atom:bool}|"done",
///               "next":{"<true input atoms, sorted, space-joined>":id}}]}
/// Done states have "output":"done" and no "next".
std::string transducer_to_json(const Transducer& t);

Transducer transducer_from_json(const std::string& text);

/// GraphViz rendering of a transducer.
std::string transducer_to_dot(const Transducer& t);

} // namespace mpsynth
