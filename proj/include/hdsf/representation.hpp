#pragma once

#include "hdsf/structure.hpp"

namespace hdsf {

// Which vector the child-context sum scales: the paper's printed equation
// multiplies each A[j,z] by f_j itself (row-sum scaling); the cited prior
// work composes the children f_z instead.
enum class ChildContextMode { paper, cited_work };

ChildContextMode parse_child_context(const std::string& s);
const char* child_context_name(ChildContextMode m);

// p_j = r_j * e_root + sum_z A[z,j] * f_z
Graph::Var parent_context(Graph& g, std::size_t j, const SoftStructure& s,
                          const std::vector<Graph::Var>& f,
                          Graph::Var e_root);

// c_j = (sum_z A[j,z]) * f_j, or sum_z A[j,z] * f_z in cited_work mode.
Graph::Var child_context(Graph& g, std::size_t j, const SoftStructure& s,
                         const std::vector<Graph::Var>& f,
                         ChildContextMode mode);

// g_j = LeakyReLU(W_g [p_j || c_j || f_j] + b_g)
Graph::Var sentence_struct_rep(Graph& g, Graph::Var p, Graph::Var c,
                               Graph::Var f, Graph::Var w_g, Graph::Var b_g,
                               double slope);

// x = mean over j of g_j
Graph::Var document_rep(Graph& g, const std::vector<Graph::Var>& gs);

}  // namespace hdsf
