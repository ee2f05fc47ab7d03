#include "plap/json_util.hpp"

#include <algorithm>
#include <cmath>

namespace plap::json_util {

void check_keys(const nlohmann::json& j, std::initializer_list<std::string_view> allowed,
                std::string_view context)
{
    require(j.is_object(), ErrorKind::Validation, std::string(context) + ": expected a JSON object");
    for (const auto& item : j.items()) {
        const bool known = std::find(allowed.begin(), allowed.end(), item.key()) != allowed.end();
        require(known, ErrorKind::Validation,
                std::string(context) + ": unknown key '" + item.key() + "'");
    }
}

Point to_point(const nlohmann::json& j)
{
    require(j.is_array() && !j.empty(), ErrorKind::Validation, "expected a non-empty coordinate array");
    Point x(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        require(j[i].is_number(), ErrorKind::Validation, "coordinates must be numbers");
        x[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    }
    return x;
}

nlohmann::json from_point(const Point& x)
{
    auto arr = nlohmann::json::array();
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        arr.push_back(x[i]);
    }
    return arr;
}

double get_number(const nlohmann::json& j, std::string_view key)
{
    const std::string k(key);
    require(j.contains(k) && j.at(k).is_number(), ErrorKind::Validation,
            "missing or non-numeric key '" + k + "'");
    const double v = j.at(k).get<double>();
    require(std::isfinite(v), ErrorKind::Validation, "non-finite value for '" + k + "'");
    return v;
}

double get_number_or(const nlohmann::json& j, std::string_view key, double fallback)
{
    return j.contains(std::string(key)) ? get_number(j, key) : fallback;
}

int get_int(const nlohmann::json& j, std::string_view key)
{
    const std::string k(key);
    require(j.contains(k) && j.at(k).is_number_integer(), ErrorKind::Validation,
            "missing or non-integer key '" + k + "'");
    return j.at(k).get<int>();
}

int get_int_or(const nlohmann::json& j, std::string_view key, int fallback)
{
    return j.contains(std::string(key)) ? get_int(j, key) : fallback;
}

}  // namespace plap::json_util
