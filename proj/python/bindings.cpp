#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "okamoto/certificate.hpp"
#include "okamoto/render.hpp"

namespace py = pybind11;
using namespace okamoto;

namespace {

Json params_from(const std::string& text) {
  Json p = Json::parse(text, nullptr, false);
  if (p.is_discarded()) throw Error("InputError", "params are not JSON");
  return p;
}

}  // namespace

PYBIND11_MODULE(_okamoto, m) {
  m.doc() = "Slices of Okamoto's functions: exact orbit dynamics and certificates.";

  static py::exception<Error> error(m, "OkamotoError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      // args are (kind, message)
      PyErr_SetObject(error.ptr(), py::make_tuple(e.kind(), e.what()).ptr());
    }
  });

  m.def(
      "make_certificate",
      [](const std::string& kind, const std::string& params) {
        Json p = params_from(params);
        py::gil_scoped_release release;
        return make_certificate(kind, p).dump();
      },
      py::arg("kind"), py::arg("params_json"), "Certificate as a JSON string.");

  m.def(
      "check",
      [](const std::string& cert) {
        Json c = params_from(cert);
        py::gil_scoped_release release;
        return check(c).to_json().dump();
      },
      py::arg("certificate_json"));

  m.def(
      "render_svg",
      [](const std::string& q, int iterations, const std::vector<std::string>& ys, int width, int height) {
        QContext ctx(parse_number(q));
        RenderSpec spec;
        spec.width = width;
        spec.height = height;
        spec.iterations = iterations;
        for (const auto& y : ys) spec.slices.push_back({parse_rational(y)});
        py::gil_scoped_release release;
        return render_kq(ctx, spec).svg;
      },
      py::arg("q"), py::arg("iterations") = 6, py::arg("ys") = std::vector<std::string>{},
      py::arg("width") = 600, py::arg("height") = 600);

  m.def("exit_code", [](const std::string& kind) { return exit_code_for(Error(kind, "")); }, py::arg("kind"));
}
