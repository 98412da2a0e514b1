#pragma once

#include <optional>
#include <string>

#include "cnl/constraints.hpp"
#include "cnl/model.hpp"

namespace cnl {

// One instance file: base CNL data, its constraint system, and optionally the
// pricing or mixture extension. For pricing files the base (r, v) is the
// level-1 slice; for mixture files the base v is the type-1 weights.
struct InstanceBundle {
    Instance base;
    ConstraintSet constraints;
    std::optional<PricingInstance> pricing;
    std::optional<MixtureInstance> mixture;
};

inline constexpr const char* kInstanceSchema = "cnl-instance/1";

// Serialization is lossless: doubles are written as shortest decimal strings
// that reload to the identical bit pattern.
std::string to_json_text(const InstanceBundle& bundle);
InstanceBundle from_json_text(const std::string& text);

InstanceBundle load_instance(const std::string& path);
void save_instance(const InstanceBundle& bundle, const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace cnl
