#include "qficoh/io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace qficoh::io {

Json matrix_to_json(const Matrix& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) {
        throw ParseError("matrix payload must be a non-empty array of rows");
    }
    const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
    const Eigen::Index cols = static_cast<Eigen::Index>(j.front().size());
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const Json& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
            throw ParseError("matrix rows have inconsistent lengths");
        }
        for (Eigen::Index c = 0; c < cols; ++c) {
            const Json& entry = row[static_cast<std::size_t>(c)];
            if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
                !entry[1].is_number()) {
                throw ParseError("matrix entries must be [re, im] number pairs");
            }
            const double re = entry[0].get<double>();
            const double im = entry[1].get<double>();
            if (!std::isfinite(re) || !std::isfinite(im)) {
                throw ParseError("matrix entries must be finite");
            }
            m(r, c) = Complex(re, im);
        }
    }
    return m;
}

Json matrix_file(const Matrix& m) {
    Json doc;
    doc["dim"] = m.rows();
    doc["matrix"] = matrix_to_json(m);
    return doc;
}

Json povm_file(const std::vector<Matrix>& elements) {
    Json doc;
    doc["dim"] = elements.empty() ? 0 : elements.front().rows();
    Json arr = Json::array();
    for (const Matrix& e : elements) {
        arr.push_back(matrix_to_json(e));
    }
    doc["elements"] = std::move(arr);
    return doc;
}

namespace {

Eigen::Index declared_dim(const Json& doc) {
    if (!doc.contains("dim") || !doc["dim"].is_number_integer()) {
        throw ParseError("file must declare an integer \"dim\"");
    }
    const auto dim = doc["dim"].get<Eigen::Index>();
    if (dim < 1) {
        throw ParseError("\"dim\" must be positive");
    }
    return dim;
}

} // namespace

Matrix parse_matrix_file(const Json& doc) {
    const Eigen::Index dim = declared_dim(doc);
    if (!doc.contains("matrix")) {
        throw ParseError("matrix file missing \"matrix\" field");
    }
    Matrix m = matrix_from_json(doc["matrix"]);
    if (m.rows() != dim || m.cols() != dim) {
        std::ostringstream msg;
        msg << "matrix payload is " << m.rows() << "x" << m.cols() << " but dim = " << dim;
        throw ParseError(msg.str());
    }
    return m;
}

std::vector<Matrix> parse_povm_file(const Json& doc) {
    const Eigen::Index dim = declared_dim(doc);
    if (!doc.contains("elements") || !doc["elements"].is_array() || doc["elements"].empty()) {
        throw ParseError("povm file needs a non-empty \"elements\" array");
    }
    std::vector<Matrix> elements;
    for (const Json& payload : doc["elements"]) {
        Matrix e = matrix_from_json(payload);
        if (e.rows() != dim || e.cols() != dim) {
            throw ParseError("povm element dimension disagrees with declared dim");
        }
        elements.push_back(std::move(e));
    }
    return elements;
}

Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open file: " + path);
    }
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& err) {
        throw ParseError(std::string("malformed JSON in ") + path + ": " + err.what());
    }
}

DensityMatrix load_state(const std::string& path, const TolerancePolicy& tol) {
    return DensityMatrix::validate(parse_matrix_file(load_json(path)), tol);
}

Povm load_povm(const std::string& path, const TolerancePolicy& tol) {
    return Povm::validate(parse_povm_file(load_json(path)), tol);
}

Matrix load_observable(const std::string& path, const TolerancePolicy& tol) {
    Matrix m = parse_matrix_file(load_json(path));
    require_hermitian(m, tol.herm, "observable");
    return m;
}

} // namespace qficoh::io
