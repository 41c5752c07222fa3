#pragma once

// JSON forms for the library's value types and small file helpers.
//
//   step function   {"pieces":[[value,width],...]}
//   simple function {"atoms":[[re,im,weight],...]}
//   operator        {"algebra":{"blocks":[{"dim":d,"scale":c},...]},
//                    "blocks":[{"re":[[...]],"im":[[...]]},...]}
//
// Readers validate through the types' own constructors, so a file that
// parses but violates an invariant (negative width, mismatched block shape)
// fails with the same errors as programmatic construction.  Missing "im"
// parts are treated as zero; writers always emit both parts.

#include <json.hpp>

#include <complex>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "nclorentz/common.hpp"
#include "nclorentz/lorentz.hpp"
#include "nclorentz/operator_matrix.hpp"
#include "nclorentz/step_function.hpp"

namespace nclorentz {

inline nlohmann::json to_json(const step_function& f) {
    nlohmann::json pieces = nlohmann::json::array();
    for (const piece& pc : f.pieces()) pieces.push_back({pc.value, pc.width});
    return {{"pieces", std::move(pieces)}};
}

inline step_function step_function_from_json(const nlohmann::json& j) {
    std::vector<piece> pcs;
    for (const nlohmann::json& row : j.at("pieces")) {
        if (!row.is_array() || row.size() != 2)
            throw std::invalid_argument("step function JSON: each piece is [value, width]");
        pcs.push_back({row.at(0).get<double>(), row.at(1).get<double>()});
    }
    return step_function(std::move(pcs));
}

inline nlohmann::json to_json(const simple_function& f) {
    nlohmann::json atoms = nlohmann::json::array();
    for (const atom& a : f.atoms())
        atoms.push_back({a.value.real(), a.value.imag(), a.weight});
    return {{"atoms", std::move(atoms)}};
}

inline simple_function simple_function_from_json(const nlohmann::json& j) {
    std::vector<atom> atoms;
    for (const nlohmann::json& row : j.at("atoms")) {
        if (!row.is_array() || row.size() != 3)
            throw std::invalid_argument("simple function JSON: each atom is [re, im, weight]");
        atoms.push_back({{row.at(0).get<double>(), row.at(1).get<double>()},
                         row.at(2).get<double>()});
    }
    return simple_function(std::move(atoms));
}

inline nlohmann::json to_json(const tracial_algebra& alg) {
    nlohmann::json blocks = nlohmann::json::array();
    for (const algebra_block& b : alg.blocks())
        blocks.push_back({{"dim", b.dim}, {"scale", b.trace_scale}});
    return {{"blocks", std::move(blocks)}};
}

inline algebra_ptr algebra_from_json(const nlohmann::json& j) {
    std::vector<algebra_block> blocks;
    for (const nlohmann::json& b : j.at("blocks"))
        blocks.push_back({b.at("dim").get<Eigen::Index>(), b.at("scale").get<double>()});
    return make_algebra(std::move(blocks));
}

inline nlohmann::json to_json(const operator_matrix& x) {
    nlohmann::json blocks = nlohmann::json::array();
    for (const Eigen::MatrixXcd& m : x.blocks()) {
        nlohmann::json re = nlohmann::json::array();
        nlohmann::json im = nlohmann::json::array();
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            nlohmann::json re_row = nlohmann::json::array();
            nlohmann::json im_row = nlohmann::json::array();
            for (Eigen::Index jj = 0; jj < m.cols(); ++jj) {
                re_row.push_back(m(i, jj).real());
                im_row.push_back(m(i, jj).imag());
            }
            re.push_back(std::move(re_row));
            im.push_back(std::move(im_row));
        }
        blocks.push_back({{"re", std::move(re)}, {"im", std::move(im)}});
    }
    return {{"algebra", to_json(*x.algebra())}, {"blocks", std::move(blocks)}};
}

inline operator_matrix operator_from_json(const nlohmann::json& j) {
    const algebra_ptr alg = algebra_from_json(j.at("algebra"));
    std::vector<Eigen::MatrixXcd> blocks;
    const nlohmann::json& jblocks = j.at("blocks");
    for (std::size_t b = 0; b < jblocks.size(); ++b) {
        const nlohmann::json& re = jblocks.at(b).at("re");
        const nlohmann::json* im =
            jblocks.at(b).contains("im") ? &jblocks.at(b).at("im") : nullptr;
        const Eigen::Index rows = static_cast<Eigen::Index>(re.size());
        Eigen::MatrixXcd m(rows, rows == 0 ? 0 : static_cast<Eigen::Index>(re.at(0).size()));
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            const nlohmann::json& re_row = re.at(static_cast<std::size_t>(i));
            if (static_cast<Eigen::Index>(re_row.size()) != m.cols())
                throw std::invalid_argument("operator JSON: ragged re matrix");
            for (Eigen::Index jj = 0; jj < m.cols(); ++jj) {
                double imag = 0.0;
                if (im)
                    imag = im->at(static_cast<std::size_t>(i))
                               .at(static_cast<std::size_t>(jj))
                               .get<double>();
                m(i, jj) = {re_row.at(static_cast<std::size_t>(jj)).get<double>(), imag};
            }
        }
        blocks.push_back(std::move(m));
    }
    return operator_matrix(alg, std::move(blocks));
}

inline nlohmann::json to_json(const grid_family& fam) {
    return {{"weights", fam.weights}, {"members", fam.members}};
}

inline nlohmann::json to_json(const disjoint_family& fam) {
    nlohmann::json members = nlohmann::json::array();
    for (const step_function& f : fam.members) members.push_back(to_json(f));
    return {{"members", std::move(members)}};
}

inline nlohmann::json complex_vector_to_json(const std::vector<std::complex<double>>& v) {
    nlohmann::json out = nlohmann::json::array();
    for (const std::complex<double>& c : v) out.push_back({c.real(), c.imag()});
    return out;
}

// ----- files --------------------------------------------------------------

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open for reading: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw io_error("read failed: " + path);
    return buf.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot open for writing: " + path);
    out << content;
    out.flush();
    if (!out) throw io_error("write failed: " + path);
}

// Parse errors surface as nlohmann::json exceptions, which the CLI maps to
// its malformed-input exit code.
inline nlohmann::json load_json_file(const std::string& path) {
    return nlohmann::json::parse(read_text_file(path));
}

}  // namespace nclorentz
