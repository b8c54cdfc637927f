#pragma once

#include <string>

#include "convexjet/hypersurface.hpp"

namespace convexjet {
namespace io {

// Jet dataset file: {"dim": n, "jets": [{"x": [...], "f": v, "g": [...]}]}.
JetDataset read_jets(const std::string& path, const Tolerances& tol = {});
void write_jets(const std::string& path, const JetDataset& ds);

// Normals file mirrors the jet schema with "n" replacing "g".
NormalDataset read_normals(const std::string& path);
void write_normals(const std::string& path, const NormalDataset& nd);

std::string validation_to_json(const ValidationReport& rep);
void write_validation(const std::string& path, const ValidationReport& rep);

// Model file: JSON header plus a base64 dual-plane table.
void write_model(const std::string& path, const ExtensionModel& model);
ExtensionModel read_model(const std::string& path);

void write_eval_csv(const std::string& path, const ExtensionModel& model, const std::vector<Vector>& points);
void write_grid_csv(const std::string& path, const GridFunction& g);

void write_mesh(const std::string& path, const SurfaceMesh& mesh);  // OBJ (3-D) or CSV polyline (2-D)

std::string base64_encode(const std::vector<double>& data);
std::vector<double> base64_decode(const std::string& text);

}  // namespace io
}  // namespace convexjet
