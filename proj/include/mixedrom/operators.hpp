#pragma once

#include "mixedrom/grid.hpp"

#include <string>

namespace mixedrom {

// Gauss-theorem finite-volume operators on StructuredGrid. Interior face values
// use the arithmetic mean of the two neighbouring cells; boundary face values
// come from the field trace. Results are cell fields whose trace is copied from
// the adjacent cell.

/// Sum_i f_i g_i V_i over active cells.
double inner_product(const ScalarField& f, const ScalarField& g, const StructuredGrid& grid);
double inner_product(const VectorField& f, const VectorField& g, const StructuredGrid& grid);
double l2_norm(const ScalarField& f, const StructuredGrid& grid);
double l2_norm(const VectorField& f, const StructuredGrid& grid);

/// Integral of f n over a patch: Sum_faces f_b n |S_f|.
Vec2 boundary_flux(const ScalarField& f, const std::string& patch, const StructuredGrid& grid);
/// Integral of f over a patch.
double boundary_integral(const ScalarField& f, const std::string& patch, const StructuredGrid& grid);
/// Integral of f g over a patch (traces).
double boundary_product(const ScalarField& f, const ScalarField& g, const std::string& patch,
                        const StructuredGrid& grid);
double boundary_product(const VectorField& f, const VectorField& g, const std::string& patch,
                        const StructuredGrid& grid);
/// Integral of the one-sided outward normal derivative du/dn over a patch, per component.
Vec2 normal_derivative_integral(const VectorField& u, const std::string& patch, const StructuredGrid& grid);

VectorField gradient(const ScalarField& p, const StructuredGrid& grid);
/// Component (i, j) = d_i u_j.
TensorField gradient(const VectorField& u, const StructuredGrid& grid);
ScalarField divergence(const VectorField& u, const StructuredGrid& grid);

/// div(nu grad u) with compact two-point face gradients; face nu is the mean of
/// the cell values (trace on boundary faces).
ScalarField laplacian(const ScalarField& u, const ScalarField& nu, const StructuredGrid& grid);
ScalarField laplacian(const ScalarField& u, double nu, const StructuredGrid& grid);
VectorField laplacian(const VectorField& u, double nu, const StructuredGrid& grid);
VectorField laplacian(const VectorField& u, const ScalarField& nu, const StructuredGrid& grid);

/// div(eta (grad u)^T); a null eta means eta = 1.
VectorField transpose_gradient_divergence(const VectorField& u, const ScalarField* eta, const StructuredGrid& grid);

enum class ConvectionScheme { Central, Upwind };

/// div(w (x) u): Sum_f (w_f . S_f) u_f / V. Central face values make this
/// bilinear in (w, u); upwind picks u_f from the cell upstream of the face flux.
VectorField convection(const VectorField& w, const VectorField& u, const StructuredGrid& grid,
                       ConvectionScheme scheme = ConvectionScheme::Central);

/// Cell-wise product eta * f on cells and traces.
ScalarField multiply(const ScalarField& eta, const ScalarField& f);
VectorField multiply(const ScalarField& eta, const VectorField& f);

}  // namespace mixedrom
