#ifndef POLARIS_MODEL_IO_HPP
#define POLARIS_MODEL_IO_HPP

#include "polaris/catalog.hpp"

namespace polaris
{

inline constexpr int kModelSchema = 1;

/// Builds and validates a model from a schema-1 document. Throws Error with
/// the offending field in the message.
Model model_from_json(const nlohmann::json& doc);

/// Reads a model from a file path, or parses the argument itself when it
/// starts with '{'.
Model load_model(const std::string& path_or_json);

/// Schema-1 document describing the model (inverse of model_from_json).
nlohmann::json model_to_json(const Model& model);

}  // namespace polaris

#endif
