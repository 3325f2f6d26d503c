#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "statleak/dataset.hpp"
#include "statleak/errors.hpp"

namespace statleak {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

[[noreturn]] void fail(std::size_t line, const std::string& message) {
    throw ParseError("line " + std::to_string(line) + ": " + message, line);
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> fields;
    std::string current;
    for (char c : s) {
        if (c == ',') {
            fields.push_back(trim(current));
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    fields.push_back(trim(current));
    return fields;
}

double parse_number(const std::string& token, std::size_t line) {
    double value = 0.0;
    const char* begin = token.data();
    const char* end = begin + token.size();
    const auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc{} || res.ptr != end) fail(line, "bad numeric value '" + token + "'");
    return value;
}

}  // namespace

void write_arff(const Dataset& ds, std::ostream& out) {
    out << "@relation " << ds.relation_name << "\n\n";
    for (const auto& name : ds.feature_names) {
        out << "@attribute " << name << " numeric\n";
    }
    out << "@attribute class {";
    for (std::size_t i = 0; i < ds.class_values.size(); ++i) {
        if (i > 0) out << ",";
        out << ds.class_values[i];
    }
    out << "}\n\n@data\n";
    for (const auto& inst : ds.instances) {
        for (double v : inst.values) out << format_double(v) << ",";
        out << ds.class_values[inst.label] << "\n";
    }
}

Dataset read_arff(std::istream& in) {
    Dataset ds;
    bool saw_relation = false;
    bool saw_class = false;
    bool in_data = false;
    std::size_t line_no = 0;
    std::string raw;

    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '%') continue;

        if (!in_data && line[0] == '@') {
            std::istringstream header(line);
            std::string keyword;
            header >> keyword;
            keyword = lower(keyword);
            if (keyword == "@relation") {
                std::string name;
                header >> name;
                if (name.empty()) fail(line_no, "@relation needs a name");
                ds.relation_name = name;
                saw_relation = true;
            } else if (keyword == "@attribute") {
                if (saw_class) fail(line_no, "class attribute must be last");
                std::string name;
                header >> name;
                if (name.empty()) fail(line_no, "@attribute needs a name");
                std::string rest;
                std::getline(header, rest);
                rest = trim(rest);
                if (lower(rest) == "numeric" || lower(rest) == "real") {
                    ds.feature_names.push_back(name);
                } else if (!rest.empty() && rest.front() == '{' && rest.back() == '}') {
                    for (const auto& v : split_csv(rest.substr(1, rest.size() - 2))) {
                        if (v.empty()) fail(line_no, "empty nominal value");
                        ds.class_values.push_back(v);
                    }
                    if (ds.class_values.size() < 1) fail(line_no, "empty nominal value list");
                    saw_class = true;
                } else {
                    fail(line_no, "unsupported attribute kind '" + rest + "'");
                }
            } else if (keyword == "@data") {
                if (!saw_relation) fail(line_no, "@data before @relation");
                if (!saw_class) fail(line_no, "no nominal class attribute declared");
                in_data = true;
            } else {
                fail(line_no, "unknown directive '" + keyword + "'");
            }
            continue;
        }

        if (!in_data) fail(line_no, "data row before @data");
        const auto fields = split_csv(line);
        if (fields.size() != ds.feature_names.size() + 1) {
            fail(line_no, "expected " + std::to_string(ds.feature_names.size() + 1) +
                              " values, got " + std::to_string(fields.size()));
        }
        Instance inst;
        inst.values.reserve(ds.feature_names.size());
        for (std::size_t i = 0; i < ds.feature_names.size(); ++i) {
            inst.values.push_back(parse_number(fields[i], line_no));
        }
        const auto& label = fields.back();
        const auto it = std::find(ds.class_values.begin(), ds.class_values.end(), label);
        if (it == ds.class_values.end()) fail(line_no, "unknown class value '" + label + "'");
        inst.label = static_cast<int>(it - ds.class_values.begin());
        ds.instances.push_back(std::move(inst));
    }

    if (!saw_relation) throw ParseError("line 0: missing @relation", 0);
    if (!in_data) throw ParseError("line 0: missing @data section", 0);
    return ds;
}

void write_arff_file(const Dataset& ds, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open for writing: " + path.string());
    write_arff(ds, out);
    if (!out) throw Error("write failed: " + path.string());
}

Dataset read_arff_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open file: " + path.string());
    return read_arff(in);
}

void write_csv(const Dataset& ds, std::ostream& out) {
    for (const auto& name : ds.feature_names) out << name << ",";
    out << "class\n";
    for (const auto& inst : ds.instances) {
        for (double v : inst.values) out << format_double(v) << ",";
        out << ds.class_values[inst.label] << "\n";
    }
}

}  // namespace statleak
