#pragma once

#include <istream>
#include <ostream>
#include <string>

#include "deadlisten/classifier/classify.hpp"

namespace deadlisten::classifier {

void write_model_json(std::ostream& out, const Model& model);
// Throws corpus::FormatError on malformed input.
Model read_model_json(std::istream& in, const std::string& source);

}  // namespace deadlisten::classifier
