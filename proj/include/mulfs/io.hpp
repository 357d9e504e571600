#pragma once

#include "algebra.hpp"
#include "errors.hpp"
#include "partition.hpp"
#include "series.hpp"
#include "transforms.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace mulfs::io {

using Json = nlohmann::json;

// Compact, key-sorted text with a trailing newline.
inline std::string dump(const Json& j) { return j.dump() + "\n"; }

inline Json to_json(const AlgebraDescriptor& desc)
{
    if (desc.kind() == AlgebraKind::scalar) return Json{{"kind", "scalar"}};
    return Json{{"kind", "matrix"}, {"m", desc.matrix_size()}};
}

inline Json to_json(const AlgebraElement& x)
{
    Json out = Json::array();
    for (const auto& c : x.coords()) out.push_back(to_string(c));
    return out;
}

inline Json to_json(const MFSeries& s)
{
    Json components = Json::array();
    const std::size_t d = s.descriptor().dim();
    for (int k = 0; k <= s.order(); ++k) {
        Json table = Json::array();
        const auto& raw = s[k].raw();
        for (std::size_t t = 0; t < s[k].size(); ++t) {
            Json element = Json::array();
            for (std::size_t c = 0; c < d; ++c) element.push_back(to_string(raw[t * d + c]));
            table.push_back(std::move(element));
        }
        components.push_back(std::move(table));
    }
    return Json{{"algebra", to_json(s.descriptor())}, {"order", s.order()}, {"components", std::move(components)}};
}

inline Json to_json(const Partition& p) { return Json{{"n", p.n}, {"blocks", p.blocks}}; }

inline Json to_json(const IdentityCheck& c)
{
    return Json{{"identity", c.identity}, {"n", c.n}, {"expected", c.expected.get_str()}, {"actual", to_string(c.actual)}, {"pass", c.pass}};
}

namespace detail {

inline const Json& field(const Json& j, const std::string& key, const std::string& path)
{
    if (!j.is_object()) throw SchemaError(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw SchemaError(path + "." + key, "missing field");
    return *it;
}

inline int integer(const Json& j, const std::string& path)
{
    if (!j.is_number_integer()) throw SchemaError(path, "expected an integer");
    return j.get<int>();
}

inline Rational rational(const Json& j, const std::string& path)
{
    try {
        if (j.is_string()) return parse_rational(j.get<std::string>());
        if (j.is_number_integer()) return Rational(Integer(std::to_string(j.get<long long>())));
    } catch (const std::invalid_argument& e) {
        throw SchemaError(path, e.what());
    }
    throw SchemaError(path, "expected a rational string \"p/q\"");
}

inline const Json& array(const Json& j, std::size_t size, const std::string& path)
{
    if (!j.is_array()) throw SchemaError(path, "expected an array");
    if (j.size() != size) throw SchemaError(path, "expected " + std::to_string(size) + " entries, found " + std::to_string(j.size()));
    return j;
}

} // namespace detail

inline AlgebraDescriptor descriptor_from_json(const Json& j, const std::string& path = "$")
{
    const Json& kind = detail::field(j, "kind", path);
    if (kind == "scalar") return AlgebraDescriptor::scalar();
    if (kind == "matrix") {
        const int m = detail::integer(detail::field(j, "m", path), path + ".m");
        if (m < 1) throw SchemaError(path + ".m", "matrix size must be positive");
        return AlgebraDescriptor::matrix(m);
    }
    throw SchemaError(path + ".kind", "expected \"scalar\" or \"matrix\"");
}

inline AlgebraElement element_from_json(const Json& j, const AlgebraDescriptor& desc, const std::string& path = "$")
{
    detail::array(j, desc.dim(), path);
    std::vector<Rational> coords;
    for (std::size_t c = 0; c < desc.dim(); ++c) coords.push_back(detail::rational(j[c], path + "[" + std::to_string(c) + "]"));
    return {desc, std::move(coords)};
}

inline MFSeries series_from_json(const Json& j, const std::string& path = "$")
{
    const AlgebraDescriptor desc = descriptor_from_json(detail::field(j, "algebra", path), path + ".algebra");
    const int order = detail::integer(detail::field(j, "order", path), path + ".order");
    if (order < 0) throw SchemaError(path + ".order", "order must be nonnegative");
    const std::string cpath = path + ".components";
    const Json& components = detail::array(detail::field(j, "components", path), static_cast<std::size_t>(order) + 1, cpath);
    MFSeries s(desc, order);
    for (int k = 0; k <= order; ++k) {
        const std::string kpath = cpath + "[" + std::to_string(k) + "]";
        const Json& table = detail::array(components[static_cast<std::size_t>(k)], s[k].size(), kpath);
        for (std::size_t t = 0; t < s[k].size(); ++t)
            s[k].set(t, element_from_json(table[t], desc, kpath + "[" + std::to_string(t) + "]"));
    }
    return s;
}

inline Partition partition_from_json(const Json& j, PartitionMode mode = PartitionMode::ncl, const std::string& path = "$")
{
    const int n = detail::integer(detail::field(j, "n", path), path + ".n");
    const Json& blocks = detail::field(j, "blocks", path);
    if (!blocks.is_array()) throw SchemaError(path + ".blocks", "expected an array");
    std::vector<Block> out;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const std::string bpath = path + ".blocks[" + std::to_string(i) + "]";
        if (!blocks[i].is_array()) throw SchemaError(bpath, "expected an array");
        Block b;
        for (std::size_t e = 0; e < blocks[i].size(); ++e) b.push_back(detail::integer(blocks[i][e], bpath + "[" + std::to_string(e) + "]"));
        out.push_back(std::move(b));
    }
    return validate(std::move(out), n, mode);
}

inline Json parse(const std::string& text, const std::string& source)
{
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw SchemaError(source, std::string("invalid JSON: ") + e.what());
    }
}

} // namespace mulfs::io
