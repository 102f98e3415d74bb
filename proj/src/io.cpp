#include "crosp/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace crosp {

Json point_set_to_json(const PointSet& set)
{
    Json points = Json::array();
    for (const Point& p : set.points)
        points.push_back(p.coords);
    return Json{{"space", {{"family", family_code(set.space.family)}, {"n", set.space.n}}},
                {"points", std::move(points)},
                {"label", set.label}};
}

PointSet point_set_from_json(const Json& doc)
{
    try {
        PointSet set;
        const Json& space = doc.at("space");
        set.space = make_space(parse_family(space.at("family").get<std::string>()), space.at("n").get<int>());
        for (const Json& row : doc.at("points"))
            set.points.push_back(Point{row.get<std::vector<double>>()});
        if (doc.contains("label"))
            set.label = doc.at("label").get<std::string>();
        for (const Point& p : set.points)
            validate_point(set.space, p);
        return set;
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("malformed point-set JSON: ") + e.what());
    }
}

DistanceMatrix parse_distance_csv(std::string_view text)
{
    std::vector<double> values;
    std::size_t rows = 0, cols = 0;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos || line[line.find_first_not_of(" \t")] == '#')
            continue;
        std::size_t count = 0;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            try {
                std::size_t used = 0;
                values.push_back(std::stod(cell, &used));
                if (cell.find_first_not_of(" \t\r", used) != std::string::npos)
                    throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw UsageError("distance CSV: cannot parse '" + cell + "'");
            }
            ++count;
        }
        if (rows == 0)
            cols = count;
        else if (count != cols)
            throw UsageError("distance CSV: ragged rows");
        ++rows;
    }
    if (rows != cols)
        throw UsageError("distance CSV: matrix is not square");
    return DistanceMatrix(rows, std::move(values));
}

std::string distance_csv(const DistanceMatrix& dist)
{
    std::string out;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        for (std::size_t j = 0; j < dist.size(); ++j) {
            if (j > 0)
                out += ',';
            out += format_double(dist(i, j));
        }
        out += '\n';
    }
    return out;
}

std::string format_double(double x)
{
    if (!std::isfinite(x))
        return "null";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

void dump_into(const Json& v, int indent, int depth, std::string& out)
{
    const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
    const char* nl = indent > 0 ? "\n" : "";
    switch (v.type()) {
    case Json::value_t::number_float:
        out += format_double(v.get<double>());
        return;
    case Json::value_t::array: {
        if (v.empty()) {
            out += "[]";
            return;
        }
        // Arrays of scalars stay on one line.
        const bool flat = std::none_of(v.begin(), v.end(), [](const Json& e) { return e.is_structured(); });
        out += '[';
        bool first = true;
        for (const Json& e : v) {
            if (!first)
                out += flat ? ", " : ",";
            if (!flat)
                out += nl + pad;
            dump_into(e, indent, depth + 1, out);
            first = false;
        }
        if (!flat)
            out += nl + close_pad;
        out += ']';
        return;
    }
    case Json::value_t::object: {
        if (v.empty()) {
            out += "{}";
            return;
        }
        out += '{';
        bool first = true;
        for (auto it = v.begin(); it != v.end(); ++it) {
            if (!first)
                out += ',';
            out += nl + pad;
            out += Json(it.key()).dump();
            out += indent > 0 ? ": " : ":";
            dump_into(it.value(), indent, depth + 1, out);
            first = false;
        }
        out += nl + close_pad;
        out += '}';
        return;
    }
    default:
        out += v.dump();
    }
}

} // namespace

std::string dump_json(const Json& value, int indent)
{
    std::string out;
    dump_into(value, indent, 0, out);
    return out;
}

std::string read_text_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw UsageError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw UsageError("cannot write '" + path + "'");
    out << text;
    if (!out)
        throw UsageError("write to '" + path + "' failed");
}

} // namespace crosp
