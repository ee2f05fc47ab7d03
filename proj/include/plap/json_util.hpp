#pragma once

#include "plap/core.hpp"

#include <json.hpp>

#include <initializer_list>
#include <string>
#include <string_view>

namespace plap::json_util {

/// Rejects keys outside `allowed` with a Validation error.
void check_keys(const nlohmann::json& j, std::initializer_list<std::string_view> allowed,
                std::string_view context);

Point to_point(const nlohmann::json& j);
nlohmann::json from_point(const Point& x);

double get_number(const nlohmann::json& j, std::string_view key);
double get_number_or(const nlohmann::json& j, std::string_view key, double fallback);
int get_int(const nlohmann::json& j, std::string_view key);
int get_int_or(const nlohmann::json& j, std::string_view key, int fallback);

}  // namespace plap::json_util
