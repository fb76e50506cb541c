#include "hroot/io.hpp"

#include "hroot/errors.hpp"

namespace hroot {

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j, const std::string& what) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    throw InvalidInput(what + ": expected a number or a [re, im] pair");
}

Json matrix_to_json(const Matrix& a) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index k = 0; k < a.cols(); ++k) row.push_back(complex_to_json(a(i, k)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const Json& j, const std::string& what) {
    if (!j.is_array() || j.empty()) throw InvalidInput(what + ": expected a nonempty array of rows");
    const auto rows = j.size();
    if (!j[0].is_array() || j[0].empty()) throw InvalidInput(what + ": rows must be nonempty arrays");
    const auto cols = j[0].size();
    Matrix a(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols) throw InvalidInput(what + ": rows must have equal length");
        for (std::size_t k = 0; k < cols; ++k)
            a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
                complex_from_json(j[i][k], what + "[" + std::to_string(i) + "][" + std::to_string(k) + "]");
    }
    return a;
}

Json descriptor_to_json(const Descriptor& d) {
    Json blocks = Json::array();
    for (const auto& b : d.blocks) {
        if (const auto* r = std::get_if<RealBlock>(&b))
            blocks.push_back({{"kind", "real"}, {"lambda", r->eigenvalue}, {"size", r->size}, {"sign", r->sign}});
        else {
            const auto& p = std::get<PairBlock>(b);
            blocks.push_back({{"kind", "pair"}, {"lambda", complex_to_json(p.eigenvalue)}, {"size", p.size}});
        }
    }
    return {{"blocks", blocks}};
}

Descriptor descriptor_from_json(const Json& j) {
    if (!is_descriptor_json(j)) throw InvalidInput("descriptor: expected an object with a \"blocks\" array");
    Descriptor d;
    std::size_t i = 0;
    for (const auto& b : j["blocks"]) {
        const std::string where = "descriptor block " + std::to_string(i++);
        if (!b.is_object() || !b.contains("kind") || !b["kind"].is_string())
            throw InvalidInput(where + ": missing \"kind\"");
        if (!b.contains("size") || !b["size"].is_number_integer())
            throw InvalidInput(where + ": \"size\" must be an integer");
        const auto kind = b["kind"].get<std::string>();
        const int size = b["size"].get<int>();
        if (kind == "real") {
            if (!b.contains("lambda") || !b["lambda"].is_number())
                throw InvalidInput(where + ": \"lambda\" must be a real number");
            if (!b.contains("sign") || !b["sign"].is_number_integer())
                throw InvalidInput(where + ": \"sign\" must be 1 or -1");
            d.blocks.push_back(RealBlock{b["lambda"].get<double>(), size, b["sign"].get<int>()});
        } else if (kind == "pair") {
            if (!b.contains("lambda")) throw InvalidInput(where + ": missing \"lambda\"");
            d.blocks.push_back(PairBlock{complex_from_json(b["lambda"], where + " lambda"), size});
        } else {
            throw InvalidInput(where + ": kind must be \"real\" or \"pair\"");
        }
    }
    require_valid(d);
    return d;
}

bool is_descriptor_json(const Json& j) { return j.is_object() && j.contains("blocks") && j["blocks"].is_array(); }

bool is_pair_json(const Json& j) { return j.is_object() && j.contains("B") && j.contains("H"); }

MatrixPair pair_from_json(const Json& j) {
    if (!is_pair_json(j)) throw InvalidInput("input: expected \"B\" and \"H\" matrices");
    MatrixPair p{matrix_from_json(j["B"], "B"), matrix_from_json(j["H"], "H")};
    return p;
}

Json decision_to_json(const DecisionReport& r) {
    Json out{{"exists", r.exists}};
    if (r.certificate) {
        const auto& c = *r.certificate;
        Json pairing = Json::array();
        for (const auto& [a, b] : c.negative_pairing) pairing.push_back({a, b});
        Json roots = Json::array();
        for (const auto& rc : c.root_eigenvalues) roots.push_back({{"block", rc.block}, {"mu", complex_to_json(rc.mu)}});
        out["certificate"] = {{"zero_grouping", c.zero_grouping.tuples},
                              {"etas", c.etas},
                              {"zero_root_sizes", c.zero_root_sizes},
                              {"negative_pairing", pairing},
                              {"root_eigenvalues", roots}};
    }
    if (r.refusal) out["refusal"] = {{"property", property_id(r.refusal->property)}, {"witness", r.refusal->witness}};
    return out;
}

Json root_to_json(const RootResult& r) {
    Json out{{"m", r.m},
             {"A", matrix_to_json(r.A)},
             {"P", matrix_to_json(r.P)},
             {"root_jordan", matrix_to_json(r.root_jordan)},
             {"root_H", matrix_to_json(r.root_H)},
             {"residuals", {{"r_pow", r.r_pow}, {"r_sa", r.r_sa}}}};
    if (r.S) out["S"] = matrix_to_json(*r.S);
    return out;
}

Json residuals_to_json(const ResidualReport& r) {
    return {{"r_pow", r.r_pow}, {"r_sa", r.r_sa}, {"r_simJ", r.r_simJ}, {"r_simH", r.r_simH}, {"pass", r.pass}};
}

Json canonicalization_to_json(const CanonicalizationResult& r) {
    return {{"descriptor", descriptor_to_json(r.descriptor)},
            {"S", matrix_to_json(r.S)},
            {"residuals", {{"r_J", r.r_J}, {"r_H", r.r_H}}}};
}

}  // namespace hroot
