#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <optional>
#include <string>

#include "randutv/block_cyclic.hpp"
#include "randutv/errors.hpp"
#include "randutv/jacobi_svd.hpp"
#include "randutv/matrix.hpp"
#include "randutv/metrics.hpp"
#include "randutv/randutv_ab.hpp"
#include "randutv/randutv_blocked.hpp"
#include "randutv/tasks.hpp"

namespace py = pybind11;
using namespace randutv;

namespace {

using FArray = py::array_t<double, py::array::f_style | py::array::forcecast>;

Matrix to_owned(const FArray& a) {
    if (a.ndim() != 2) throw ShapeError("expected a 2-d array");
    const idx m = static_cast<idx>(a.shape(0)), n = static_cast<idx>(a.shape(1));
    Matrix out(m, n);
    if (m > 0 && n > 0)
        std::memcpy(out.data(), a.data(),
                    sizeof(double) * static_cast<std::size_t>(m) * static_cast<std::size_t>(n));
    return out;
}

py::array to_numpy(const Matrix& m) {
    py::array_t<double, py::array::f_style> out({m.rows(), m.cols()});
    if (m.rows() > 0 && m.cols() > 0)
        std::memcpy(out.mutable_data(), m.data(),
                    sizeof(double) * static_cast<std::size_t>(m.rows()) *
                        static_cast<std::size_t>(m.cols()));
    return out;
}

py::object maybe_numpy(const Matrix& m) {
    if (m.rows() == 0 && m.cols() == 0) return py::none();
    return to_numpy(m);
}

py::tuple factorize(const FArray& a, idx b, int q, const std::string& algo, int workers,
                    std::uint64_t seed, bool build_uv, bool qr_prepass) {
    if (algo != "blocked" && algo != "ab")
        throw ConfigError("algo must be 'blocked' or 'ab', got '" + algo + "'");
    const Matrix in = to_owned(a);
    UTVConfig cfg;
    cfg.b = b > 0 ? b : (algo == "ab" ? 256 : 128);
    cfg.q = q;
    cfg.seed = seed;
    cfg.build_u = cfg.build_v = build_uv;
    cfg.qr_prepass = qr_prepass;
    UTVResult r;
    {
        py::gil_scoped_release release;
        r = algo == "ab" ? randutv_ab(in.view(), cfg, workers) : randutv::randutv(in.view(), cfg);
    }
    return py::make_tuple(to_numpy(r.t), maybe_numpy(r.u), maybe_numpy(r.v));
}

py::tuple svd_py(const FArray& a, bool full) {
    const Matrix in = to_owned(a);
    SvdTriple s;
    {
        py::gil_scoped_release release;
        s = full ? svd_full(in.view()) : svd_dense(in.view());
    }
    py::array_t<double> sig(static_cast<py::ssize_t>(s.sigma.size()));
    std::memcpy(sig.mutable_data(), s.sigma.data(), sizeof(double) * s.sigma.size());
    return py::make_tuple(to_numpy(s.u), sig, to_numpy(s.v));
}

py::array_t<double> singular_values_py(const FArray& a) {
    const Matrix in = to_owned(a);
    std::vector<double> s;
    {
        py::gil_scoped_release release;
        s = singular_values(in.view());
    }
    py::array_t<double> out(static_cast<py::ssize_t>(s.size()));
    std::memcpy(out.mutable_data(), s.data(), sizeof(double) * s.size());
    return out;
}

std::string analyze_transcript(idx m, idx n, idx b, int q, bool build_uv) {
    UTVConfig cfg;
    cfg.b = b;
    cfg.q = q;
    cfg.build_u = cfg.build_v = build_uv;
    return transcript(analyze(m, n, cfg));
}

std::string layout_map(idx m, idx n, idx mb, idx nb, int p, int q) {
    return ownership_map(BlockCyclicSpec{m, n, mb, nb, p, q});
}

}  // namespace

PYBIND11_MODULE(_randutv, m) {
    m.doc() = "randomized rank-revealing UTV factorization";

    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const ShapeError& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        } catch (const ConfigError& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        } catch (const randutv::IndexError& e) {
            PyErr_SetString(PyExc_IndexError, e.what());
        } catch (const IoError& e) {
            PyErr_SetString(PyExc_OSError, e.what());
        }
    });

    m.def("factorize", &factorize, py::arg("a"), py::kw_only(), py::arg("b") = 0,
          py::arg("q") = 1, py::arg("algo") = "blocked", py::arg("workers") = 1,
          py::arg("seed") = 0, py::arg("build_uv") = true, py::arg("qr_prepass") = false,
          "Factor a as u @ t @ v.T with orthogonal u, v and upper trapezoidal t\n"
          "whose diagonal approximates the singular values in descending order.\n"
          "Returns (t, u, v); u and v are None when build_uv is False.  algo\n"
          "'blocked' is the single-threaded reference driver; 'ab' runs the\n"
          "factorization as a task graph on `workers` threads (b must divide\n"
          "both dimensions) and its result is bitwise identical for any worker\n"
          "count.  b defaults to 128 for 'blocked' and 256 for 'ab'.");
    m.def("svd", &svd_py, py::arg("a"), py::kw_only(), py::arg("full") = false,
          "Singular value decomposition (u, sigma, v) via one-sided Jacobi;\n"
          "economy factors by default, square ones with full=True.");
    m.def("singular_values", &singular_values_py, py::arg("a"),
          "Singular values of a, descending.");
    m.def(
        "make_test_matrix",
        [](const std::string& kind, idx rows, idx cols, std::uint64_t seed) {
            return to_numpy(make_test_matrix(kind, rows, cols, seed));
        },
        py::arg("kind"), py::arg("m"), py::arg("n"), py::kw_only(), py::arg("seed") = 0,
          "Deterministic test matrix: 'gaussian', 'identity', 'geometric:<beta>',\n"
          "or 'rank:<r>'.");
    m.def("scaled_time", &scaled_time, py::arg("seconds"), py::arg("n"),
          "seconds / n**3 * 1e10, the size-independent timing scale.");
    m.def("analyze_transcript", &analyze_transcript, py::arg("m"), py::arg("n"), py::kw_only(),
          py::arg("b"), py::arg("q") = 1, py::arg("build_uv") = true,
          "Transcript of the task stream the task-parallel driver would run,\n"
          "one task per line.");
    m.def("layout_map", &layout_map, py::arg("m"), py::arg("n"), py::arg("mb"), py::arg("nb"),
          py::arg("p"), py::arg("q"),
          "ASCII block-cyclic ownership map of an m x n matrix in mb x nb\n"
          "blocks over a p x q process grid.");
}
