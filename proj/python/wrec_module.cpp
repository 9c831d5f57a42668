#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <algorithm>

#include "wrec/autoencoder.hpp"
#include "wrec/embedding.hpp"
#include "wrec/errors.hpp"
#include "wrec/evalmetrics.hpp"
#include "wrec/model_io.hpp"
#include "wrec/recommend.hpp"
#include "wrec/whitening.hpp"

namespace py = pybind11;
using namespace wrec;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

DenseMatrix to_dense(const Array& a) {
  if (a.ndim() != 2) throw DimensionError("expected a 2-d array");
  const auto* p = a.data();
  return DenseMatrix(a.shape(0), a.shape(1),
                     std::vector<double>(p, p + a.shape(0) * a.shape(1)));
}

Array to_array(const DenseMatrix& m) {
  Array out({m.rows(), m.cols()});
  std::copy(m.values().begin(), m.values().end(), out.mutable_data());
  return out;
}

EmbeddingMatrix to_embedding(const Array& a) {
  EmbeddingMatrix e;
  e.values = to_dense(a);
  e.singular_values.assign(e.values.rows(), 0.0);
  return e;
}

SimilarityMatrix to_similarity(const Array& b) {
  SimilarityMatrix s;
  s.values = to_dense(b);
  if (s.values.rows() != s.values.cols()) throw DimensionError("similarity matrix must be square");
  return s;
}

InteractionMatrix from_binary_array(const Array& a) {
  if (a.ndim() != 2) throw DimensionError("expected a 2-d array");
  auto v = a.unchecked<2>();
  std::vector<std::vector<ItemIndex>> rows(a.shape(0));
  for (py::ssize_t u = 0; u < a.shape(0); ++u) {
    for (py::ssize_t i = 0; i < a.shape(1); ++i) {
      if (v(u, i) != 0.0) rows[u].push_back(static_cast<ItemIndex>(i));
    }
  }
  return InteractionMatrix(rows, a.shape(1));
}

RankedList ranked_from(const std::vector<ItemIndex>& items) {
  RankedList l;
  for (std::size_t k = 0; k < items.size(); ++k) l.entries.push_back({items[k], -static_cast<double>(k)});
  return l;
}

std::vector<ItemIndex> sorted(std::vector<ItemIndex> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Closed-form linear autoencoder recommenders";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<DimensionError>(m, "DimensionError", base.ptr());
  py::register_exception<CapacityError>(m, "CapacityError", base.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());

  py::class_<InteractionMatrix>(m, "InteractionMatrix")
      .def(py::init<std::vector<std::vector<ItemIndex>>, std::size_t, std::vector<std::string>,
                    std::vector<std::string>>(),
           py::arg("rows"), py::arg("n_items"), py::arg("user_ids") = std::vector<std::string>{},
           py::arg("item_ids") = std::vector<std::string>{})
      .def_static("from_dense", &from_binary_array, py::arg("array"),
                  "Nonzero entries of a 2-d array become interactions.")
      .def_property_readonly("n_users", &InteractionMatrix::n_users)
      .def_property_readonly("n_items", &InteractionMatrix::n_items)
      .def_property_readonly("nnz", &InteractionMatrix::nnz)
      .def_property_readonly("user_ids", &InteractionMatrix::user_ids)
      .def_property_readonly("item_ids", &InteractionMatrix::item_ids)
      .def("row", [](const InteractionMatrix& x, std::size_t u) {
        if (u >= x.n_users()) throw py::index_error("row out of range");
        auto r = x.row(u);
        return std::vector<ItemIndex>(r.begin(), r.end());
      })
      .def("to_dense", [](const InteractionMatrix& x) { return to_array(densify(x)); });

  m.def(
      "ridge",
      [](const InteractionMatrix& x, double lambda, const std::string& form) {
        return to_array(ridge(x, {.lambda = lambda, .form = parse_form(form)}).values);
      },
      py::arg("x"), py::arg("lam") = 200.0, py::arg("form") = "automatic",
      "(X^T X + lam I)^{-1} X^T X; form is primal, dual or automatic.");

  m.def(
      "ease",
      [](const InteractionMatrix& x, double lambda) {
        auto sol = ease(x, lambda);
        return py::make_tuple(to_array(sol.b.values), sol.alpha);
      },
      py::arg("x"), py::arg("lam") = 200.0, "Returns (B, alpha); diag(B) is exactly zero.");

  m.def(
      "zca_similarity",
      [](const InteractionMatrix& x, double eps) { return to_array(zca_similarity(x, eps).values); },
      py::arg("x"), py::arg("eps"));

  m.def(
      "covariance",
      [](const Array& a, bool centered) {
        return to_array(covariance(to_dense(a), centered ? Normalization::mean : Normalization::raw)
                            .values.dense());
      },
      py::arg("m"), py::arg("centered") = false, "M M^T, or the mean-centred covariance.");

  m.def(
      "zca_matrix", [](const Array& a, double eps) { return to_array(fit_zca(to_dense(a), eps).p.dense()); },
      py::arg("m"), py::arg("eps"), "P = U (S + eps I)^{-1/2} U^T for the raw covariance of m.");

  m.def(
      "whiten",
      [](const Array& a, double eps) {
        const DenseMatrix d = to_dense(a);
        return to_array(whiten(fit_zca(d, eps), d));
      },
      py::arg("m"), py::arg("eps"));

  m.def(
      "svd_embed",
      [](const InteractionMatrix& x, std::size_t dim) {
        auto e = svd_embed(x, dim);
        return py::make_tuple(to_array(e.values), e.singular_values);
      },
      py::arg("x"), py::arg("dim"), "Returns (E, singular_values) with E = S^{1/2} V^T.");

  m.def(
      "embed_dot", [](const Array& e) { return to_array(embed_dot(to_embedding(e)).values); },
      py::arg("e"));
  m.def(
      "embed_ridge",
      [](const Array& e, double lambda) { return to_array(embed_ridge(to_embedding(e), lambda).values); },
      py::arg("e"), py::arg("lam"));
  m.def(
      "embed_ease",
      [](const Array& e, double lambda) { return to_array(embed_ease(to_embedding(e), lambda).values); },
      py::arg("e"), py::arg("lam"));

  m.def(
      "top_n",
      [](const std::vector<double>& scores, std::vector<ItemIndex> seen, std::size_t n) {
        std::vector<std::pair<ItemIndex, double>> out;
        for (const auto& e : top_n(scores, sorted(std::move(seen)), n).entries) out.emplace_back(e.item, e.score);
        return out;
      },
      py::arg("scores"), py::arg("seen"), py::arg("n"));

  m.def(
      "recommend",
      [](const Array& b, const InteractionMatrix& foldin, std::size_t n) {
        std::vector<std::vector<ItemIndex>> out;
        for (const auto& l : batch_recommend(foldin, to_similarity(b), n)) {
          std::vector<ItemIndex> items;
          for (const auto& e : l.entries) items.push_back(e.item);
          out.push_back(std::move(items));
        }
        return out;
      },
      py::arg("b"), py::arg("foldin"), py::arg("n"));

  m.def(
      "recall_at_r",
      [](const std::vector<ItemIndex>& ranked, std::vector<ItemIndex> targets, std::size_t r) {
        return recall_at_r(ranked_from(ranked), sorted(std::move(targets)), r);
      },
      py::arg("ranked"), py::arg("targets"), py::arg("r"));
  m.def(
      "ndcg_at_r",
      [](const std::vector<ItemIndex>& ranked, std::vector<ItemIndex> targets, std::size_t r) {
        return ndcg_at_r(ranked_from(ranked), sorted(std::move(targets)), r);
      },
      py::arg("ranked"), py::arg("targets"), py::arg("r"));

  m.def(
      "evaluate",
      [](const Array& b, const InteractionMatrix& foldin, std::vector<std::vector<ItemIndex>> targets,
         const std::vector<std::size_t>& cutoffs) {
        for (auto& t : targets) t = sorted(std::move(t));
        HeldOutSet h{foldin, std::move(targets)};
        auto rep = evaluate(h, to_similarity(b), cutoffs);
        py::dict recall, ndcg;
        for (std::size_t r : rep.cutoffs) {
          recall[py::int_(r)] = rep.recall.at(r).mean;
          ndcg[py::int_(r)] = rep.ndcg.at(r).mean;
        }
        py::dict out;
        out["recall"] = recall;
        out["ndcg"] = ndcg;
        out["n_users_evaluated"] = rep.n_users_evaluated;
        out["excluded_users"] = rep.excluded_users;
        return out;
      },
      py::arg("b"), py::arg("foldin"), py::arg("targets"), py::arg("cutoffs"));

  m.def(
      "save_model",
      [](const std::filesystem::path& path, const Array& b, const std::string& kind, double lambda,
         std::vector<std::string> item_ids) {
        ModelFile f;
        f.similarity = to_similarity(b);
        f.similarity.kind = parse_kind(kind);
        f.similarity.config.lambda = lambda;
        f.item_ids = std::move(item_ids);
        if (f.item_ids.empty()) {
          for (std::size_t i = 0; i < f.similarity.dim(); ++i) f.item_ids.push_back(std::to_string(i));
        }
        save_model(path, f);
      },
      py::arg("path"), py::arg("b"), py::arg("kind") = "ridge", py::arg("lam") = 0.0,
      py::arg("item_ids") = std::vector<std::string>{});

  m.def(
      "load_model",
      [](const std::filesystem::path& path) {
        auto f = load_model(path);
        py::dict out;
        out["kind"] = to_string(f.similarity.kind);
        out["lam"] = f.similarity.config.lambda;
        out["b"] = to_array(f.similarity.values);
        out["item_ids"] = f.item_ids;
        return out;
      },
      py::arg("path"));
}
