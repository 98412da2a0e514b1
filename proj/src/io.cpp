#include "cnl/io.hpp"

#include <fstream>
#include <sstream>

#include "cnl/errors.hpp"
#include "json.hpp"

namespace cnl {

namespace {

using nlohmann::json;

json matrix_rows(const std::vector<double>& flat, int rows, int cols) {
    json out = json::array();
    for (int i = 0; i < rows; ++i) {
        json row = json::array();
        for (int j = 0; j < cols; ++j) row.push_back(flat[static_cast<std::size_t>(i) * cols + j]);
        out.push_back(std::move(row));
    }
    return out;
}

std::vector<double> flat_matrix(const json& j, int rows, int cols, const char* what) {
    if (!j.is_array() || static_cast<int>(j.size()) != rows)
        throw InputError(std::string(what) + ": expected " + std::to_string(rows) + " rows");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(rows) * cols);
    for (const json& row : j) {
        if (!row.is_array() || static_cast<int>(row.size()) != cols)
            throw InputError(std::string(what) + ": expected rows of length " + std::to_string(cols));
        for (const json& x : row) out.push_back(x.get<double>());
    }
    return out;
}

std::vector<std::vector<double>> nested(const json& j, int rows, int cols, const char* what) {
    std::vector<double> flat = flat_matrix(j, rows, cols, what);
    std::vector<std::vector<double>> out(rows, std::vector<double>(cols));
    for (int i = 0; i < rows; ++i)
        for (int l = 0; l < cols; ++l) out[i][l] = flat[static_cast<std::size_t>(i) * cols + l];
    return out;
}

json to_json(const std::vector<std::vector<double>>& rows) {
    json out = json::array();
    for (const auto& row : rows) out.push_back(row);
    return out;
}

}  // namespace

std::string to_json_text(const InstanceBundle& bundle) {
    const Instance& b = bundle.base;
    json j;
    j["schema"] = kInstanceSchema;
    j["m"] = b.m;
    j["N"] = b.N;
    j["r"] = b.r;
    j["v"] = b.v;
    j["alpha"] = matrix_rows(b.alpha, b.m, b.N);
    j["sigma"] = b.sigma;
    j["v0"] = b.v0;

    json rows = json::array();
    json builders = json::array();
    for (const ConstraintRow& row : bundle.constraints.rows()) {
        rows.push_back({{"coeffs", row.coeffs}, {"rhs", row.rhs}, {"tag", row.tag}});
        if (row.tag != "custom") {
            bool seen = false;
            for (const json& x : builders) seen = seen || x.get<std::string>() == row.tag;
            if (!seen) builders.push_back(row.tag);
        }
    }
    j["constraints"] = {{"rows", std::move(rows)}, {"builders", std::move(builders)}};

    if (bundle.pricing) {
        const PricingInstance& p = *bundle.pricing;
        j["pricing"] = {{"L", p.L}, {"p", to_json(p.p)}, {"v", to_json(p.v)}};
    }
    if (bundle.mixture) {
        const MixtureInstance& mx = *bundle.mixture;
        j["mixture"] = {{"T", mx.T}, {"theta", mx.theta}, {"v", to_json(mx.v)}};
    }
    return j.dump(2) + "\n";
}

InstanceBundle from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw InputError(std::string("instance JSON parse failure: ") + e.what());
    }
    try {
        if (j.value("schema", std::string()) != kInstanceSchema)
            throw InputError("unsupported instance schema (expected cnl-instance/1)");
        InstanceBundle bundle;
        Instance& b = bundle.base;
        b.m = j.at("m").get<int>();
        b.N = j.at("N").get<int>();
        b.r = j.at("r").get<std::vector<double>>();
        b.v = j.at("v").get<std::vector<double>>();
        b.alpha = flat_matrix(j.at("alpha"), b.m, b.N, "alpha");
        b.sigma = j.at("sigma").get<std::vector<double>>();
        b.v0 = j.at("v0").get<std::vector<double>>();
        b.validate();

        bundle.constraints = ConstraintSet(b.m);
        if (j.contains("constraints")) {
            for (const json& row : j.at("constraints").value("rows", json::array())) {
                ConstraintRow cr;
                cr.coeffs = row.at("coeffs").get<std::vector<double>>();
                cr.rhs = row.at("rhs").get<double>();
                cr.tag = row.value("tag", std::string("custom"));
                bundle.constraints.add_row(std::move(cr));
            }
        }

        if (j.contains("pricing")) {
            const json& pj = j.at("pricing");
            PricingInstance p;
            p.m = b.m;
            p.N = b.N;
            p.L = pj.at("L").get<int>();
            p.alpha = b.alpha;
            p.sigma = b.sigma;
            p.v0 = b.v0;
            p.p = nested(pj.at("p"), p.m, p.L, "pricing.p");
            p.v = nested(pj.at("v"), p.m, p.L, "pricing.v");
            p.validate();
            bundle.pricing = std::move(p);
        }
        if (j.contains("mixture")) {
            const json& mj = j.at("mixture");
            MixtureInstance mx;
            mx.m = b.m;
            mx.N = b.N;
            mx.T = mj.at("T").get<int>();
            mx.r = b.r;
            mx.alpha = b.alpha;
            mx.sigma = b.sigma;
            mx.v0 = b.v0;
            mx.theta = mj.at("theta").get<std::vector<double>>();
            mx.v = nested(mj.at("v"), mx.T, mx.m, "mixture.v");
            mx.validate();
            bundle.mixture = std::move(mx);
        }
        return bundle;
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed instance JSON: ") + e.what());
    }
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write file: " + path);
    out << content;
}

InstanceBundle load_instance(const std::string& path) { return from_json_text(read_text_file(path)); }

void save_instance(const InstanceBundle& bundle, const std::string& path) {
    write_text_file(path, to_json_text(bundle));
}

}  // namespace cnl
