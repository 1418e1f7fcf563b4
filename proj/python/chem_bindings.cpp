// Copyright 2026 The CHEM Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <string>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "chem/bench.hpp"
#include "chem/errors.hpp"
#include "chem/paillier.hpp"
#include "chem/parametrization.hpp"
#include "chem/radix_cache.hpp"
#include "chem/serialization.hpp"
#include "chem/tensor.hpp"
#include "chem/verify.hpp"

namespace py = pybind11;

// Python int <-> mpz_class through hex strings.
namespace pybind11::detail {
template <>
struct type_caster<chem::BigInt> {
  PYBIND11_TYPE_CASTER(chem::BigInt, const_name("int"));

  bool load(handle src, bool) {
    if (!src || !PyLong_Check(src.ptr())) return false;
    object hex = reinterpret_steal<object>(PyNumber_ToBase(src.ptr(), 16));
    if (!hex) {
      PyErr_Clear();
      return false;
    }
    return value.set_str(hex.cast<std::string>(), 0) == 0;
  }

  static handle cast(const chem::BigInt& v, return_value_policy, handle) {
    const std::string s = v.get_str(16);
    return PyLong_FromString(s.c_str(), nullptr, 16);
  }
};
}  // namespace pybind11::detail

namespace {

using chem::AdditiveScheme;
using chem::Decryptor;

std::shared_ptr<AdditiveScheme> mutable_scheme(std::shared_ptr<const AdditiveScheme> s) {
  return std::const_pointer_cast<AdditiveScheme>(std::move(s));
}

std::shared_ptr<Decryptor> mutable_decryptor(std::shared_ptr<const Decryptor> d) {
  return std::const_pointer_cast<Decryptor>(std::move(d));
}

py::object to_python(const chem::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

chem::json from_python(const py::object& o) {
  return chem::json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

}  // namespace

PYBIND11_MODULE(_chem, m) {
  m.doc() = "Radix-cached additive homomorphic encryption";

  auto base = py::register_exception<chem::Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<chem::RangeError>(m, "RangeError", base);
  py::register_exception<chem::CapacityError>(m, "CapacityError", base);
  py::register_exception<chem::ContextError>(m, "ContextError", base);
  py::register_exception<chem::MalformedCiphertextError>(m, "MalformedCiphertextError", base);
  py::register_exception<chem::ValidationError>(m, "ValidationError", base);
  py::register_exception<chem::KeyGenerationError>(m, "KeyGenerationError", base);
  py::register_exception<chem::ConfigError>(m, "ConfigError", base);
  py::register_exception<chem::ElementError>(m, "ElementError", base);

  py::class_<chem::RandomSource>(m, "RandomSource")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def_static("from_entropy", &chem::RandomSource::from_entropy)
      .def("next", [](chem::RandomSource& r) { return r(); })
      .def("coin", &chem::RandomSource::coin)
      .def("below", [](chem::RandomSource& r, const chem::BigInt& b) { return r.below(b); })
      .def("split", &chem::RandomSource::split, py::arg("stream"))
      .def("fork", &chem::RandomSource::fork);

  py::class_<chem::Ciphertext>(m, "Ciphertext")
      .def_readonly("context", &chem::Ciphertext::context)
      .def_readonly("parts", &chem::Ciphertext::parts)
      .def("__eq__", &chem::Ciphertext::operator==)
      .def("to_json", [](const chem::Ciphertext& c) {
        return to_python(chem::ciphertext_to_json(c));
      });

  py::class_<AdditiveScheme, std::shared_ptr<AdditiveScheme>>(m, "AdditiveScheme")
      .def_property_readonly("id", [](const AdditiveScheme& s) { return std::string(s.id()); })
      .def_property_readonly("context", &AdditiveScheme::context)
      .def_property_readonly("plaintext_modulus", &AdditiveScheme::plaintext_modulus)
      .def_property_readonly("key_bits", &AdditiveScheme::key_bits)
      .def("encrypt", &AdditiveScheme::encrypt, py::arg("m"), py::arg("rng"))
      .def("add", &AdditiveScheme::add)
      .def("to_json", [](const AdditiveScheme& s) { return to_python(chem::scheme_to_json(s)); });

  py::class_<Decryptor, std::shared_ptr<Decryptor>>(m, "Decryptor")
      .def_property_readonly("context", &Decryptor::context)
      .def("decrypt", &Decryptor::decrypt);

  py::class_<chem::SchemeBundle>(m, "SchemeBundle")
      .def_property_readonly("scheme",
                             [](const chem::SchemeBundle& b) { return mutable_scheme(b.scheme); })
      .def_property_readonly(
          "decryptor", [](const chem::SchemeBundle& b) { return mutable_decryptor(b.decryptor); })
      .def("to_json", [](const chem::SchemeBundle& b) { return to_python(chem::bundle_to_json(b)); })
      .def_static("from_json",
                  [](const py::object& o) { return chem::bundle_from_json(from_python(o)); });

  m.def(
      "make_scheme",
      [](const std::string& kind, std::size_t key_bits, chem::RandomSource& rng) {
        return chem::make_scheme(chem::parse_scheme_kind(kind), key_bits, rng);
      },
      py::arg("kind"), py::arg("key_bits"), py::arg("rng"),
      py::call_guard<py::gil_scoped_release>());

  m.def(
      "paillier_from_primes",
      [](const chem::BigInt& p, const chem::BigInt& q) {
        auto kp = chem::paillier_keypair_from_primes(p, q);
        auto scheme = std::make_shared<chem::PaillierScheme>(kp.public_key);
        return chem::SchemeBundle{scheme, std::make_shared<chem::PaillierDecryptor>(kp)};
      },
      py::arg("p"), py::arg("q"));

  py::class_<chem::RadixDigits>(m, "RadixDigits")
      .def_readonly("digits", &chem::RadixDigits::digits)
      .def_readonly("radix", &chem::RadixDigits::radix)
      .def("value", &chem::RadixDigits::value)
      .def("digit_sum", &chem::RadixDigits::digit_sum);

  m.def("highest_radix_index", &chem::highest_radix_index, py::arg("m"), py::arg("radix"));
  m.def("radix_digits", &chem::radix_digits, py::arg("x"), py::arg("radix"),
        py::arg("top_index"));
  m.def("addition_count",
        py::overload_cast<const chem::BigInt&, unsigned, std::size_t>(&chem::addition_count),
        py::arg("x"), py::arg("radix"), py::arg("top_index"));

  py::class_<chem::CacheParams>(m, "CacheParams")
      .def(py::init([](unsigned radix, unsigned bit_width, std::size_t zero_count,
                       std::size_t min_zero_inclusions, std::uint64_t max_fan_in) {
             return chem::CacheParams{radix, bit_width, zero_count, min_zero_inclusions,
                                      max_fan_in};
           }),
           py::arg("radix") = 2, py::arg("bit_width") = 16, py::arg("zero_count") = 128,
           py::arg("min_zero_inclusions") = 1, py::arg("max_fan_in") = 1)
      .def_readwrite("radix", &chem::CacheParams::radix)
      .def_readwrite("bit_width", &chem::CacheParams::bit_width)
      .def_readwrite("zero_count", &chem::CacheParams::zero_count)
      .def_readwrite("min_zero_inclusions", &chem::CacheParams::min_zero_inclusions)
      .def_readwrite("max_fan_in", &chem::CacheParams::max_fan_in);

  py::class_<chem::AssemblyStats>(m, "AssemblyStats")
      .def(py::init<>())
      .def_readonly("digit_additions", &chem::AssemblyStats::digit_additions)
      .def_readonly("randomizer_additions", &chem::AssemblyStats::randomizer_additions)
      .def_readonly("zero_terms", &chem::AssemblyStats::zero_terms)
      .def_readonly("encryptions", &chem::AssemblyStats::encryptions);

  py::class_<chem::RadixCache>(m, "RadixCache")
      .def_property_readonly("params", &chem::RadixCache::params)
      .def_property_readonly("radix", &chem::RadixCache::radix)
      .def_property_readonly("bit_width", &chem::RadixCache::bit_width)
      .def_property_readonly("max_plain", &chem::RadixCache::max_plain)
      .def_property_readonly("top_index", &chem::RadixCache::top_index)
      .def_property_readonly("radix_ctxts", &chem::RadixCache::radix_ctxts)
      .def_property_readonly("zero_ctxts", &chem::RadixCache::zero_ctxts)
      .def("fingerprint", &chem::RadixCache::fingerprint)
      .def("content_hash",
           [](const chem::RadixCache& c) {
             const auto h = c.content_hash();
             return py::bytes(reinterpret_cast<const char*>(h.data()), h.size());
           })
      .def("to_json", [](const chem::RadixCache& c) { return to_python(chem::cache_to_json(c)); })
      .def_static("from_json",
                  [](const py::object& o) { return chem::cache_from_json(from_python(o)); });

  m.def(
      "build_cache",
      [](std::shared_ptr<AdditiveScheme> scheme, const chem::CacheParams& params,
         chem::RandomSource& rng) { return chem::build_cache(std::move(scheme), params, rng); },
      py::arg("scheme"), py::arg("params"), py::arg("rng"),
      py::call_guard<py::gil_scoped_release>());

  m.def(
      "cached_encrypt",
      [](const chem::RadixCache& cache, const chem::BigInt& x, chem::RandomSource& rng,
         chem::AssemblyStats* stats) { return chem::cached_encrypt(cache, x, rng, stats); },
      py::arg("cache"), py::arg("x"), py::arg("rng"), py::arg("stats") = nullptr);

  m.def(
      "draw_zero_mask",
      [](const chem::RadixCache& cache, chem::RandomSource& rng) {
        return chem::draw_zero_mask(cache, rng).included;
      },
      py::arg("cache"), py::arg("rng"));

  py::enum_<chem::QuantMode>(m, "QuantMode")
      .value("unsigned_int", chem::QuantMode::unsigned_int)
      .value("signed_offset", chem::QuantMode::signed_offset);

  py::class_<chem::QuantParams>(m, "QuantParams")
      .def(py::init([](double scale, unsigned bit_width, chem::QuantMode mode) {
             return chem::QuantParams{scale, bit_width, mode};
           }),
           py::arg("scale") = 1.0, py::arg("bit_width") = 8,
           py::arg("mode") = chem::QuantMode::unsigned_int)
      .def_readwrite("scale", &chem::QuantParams::scale)
      .def_readwrite("bit_width", &chem::QuantParams::bit_width)
      .def_readwrite("mode", &chem::QuantParams::mode)
      .def_property_readonly("offset", &chem::QuantParams::offset)
      .def_static("weights", &chem::QuantParams::weights)
      .def_static("pixels", &chem::QuantParams::pixels);

  py::class_<chem::TensorPlain>(m, "TensorPlain")
      .def_readonly("shape", &chem::TensorPlain::shape)
      .def_readonly("values", &chem::TensorPlain::values)
      .def_readonly("quant", &chem::TensorPlain::quant)
      .def_readonly("fan_in", &chem::TensorPlain::fan_in)
      .def("__eq__", &chem::TensorPlain::operator==);

  py::class_<chem::TensorCipher>(m, "TensorCipher")
      .def_readonly("shape", &chem::TensorCipher::shape)
      .def_readonly("ciphertexts", &chem::TensorCipher::ciphertexts)
      .def_readonly("cache_fingerprint", &chem::TensorCipher::cache_fingerprint)
      .def_readonly("fan_in", &chem::TensorCipher::fan_in);

  m.def(
      "quantize",
      [](std::vector<double> values, std::vector<std::size_t> shape,
         const chem::QuantParams& quant) {
        if (shape.empty()) shape = {values.size()};
        return chem::quantize(chem::RealTensor{std::move(shape), std::move(values)}, quant);
      },
      py::arg("values"), py::arg("shape") = std::vector<std::size_t>{},
      py::arg("quant") = chem::QuantParams::weights());
  m.def(
      "dequantize", [](const chem::TensorPlain& t) { return chem::dequantize(t).values; },
      py::arg("plain"));

  m.def(
      "encrypt_tensor",
      [](const chem::RadixCache& cache, const chem::TensorPlain& t, chem::RandomSource& rng,
         unsigned workers) { return chem::encrypt_tensor(cache, t, rng, {workers, nullptr}); },
      py::arg("cache"), py::arg("plain"), py::arg("rng"), py::arg("workers") = 1,
      py::call_guard<py::gil_scoped_release>());
  m.def(
      "decrypt_tensor",
      [](std::shared_ptr<Decryptor> d, const chem::TensorCipher& c) {
        return chem::decrypt_tensor(*d, c);
      },
      py::arg("decryptor"), py::arg("cipher"), py::call_guard<py::gil_scoped_release>());
  m.def(
      "add_tensors",
      [](std::shared_ptr<AdditiveScheme> s, const chem::TensorCipher& a,
         const chem::TensorCipher& b) { return chem::add_tensors(*s, a, b); },
      py::arg("scheme"), py::arg("a"), py::arg("b"));

  m.def("predicted_cost", &chem::predicted_cost, py::arg("radix"), py::arg("m"));
  m.def("measured_cost", &chem::measured_cost, py::arg("radix"), py::arg("m"));
  m.def(
      "optimal_radix",
      [](std::uint64_t mx, unsigned first, unsigned last) {
        return chem::optimal_radix(mx, {first, last});
      },
      py::arg("m"), py::arg("first") = 2, py::arg("last") = 64);
  m.def("monotonicity_check", &chem::monotonicity_check, py::arg("m"), py::arg("r_max"));
  m.def(
      "cost_table_csv",
      [](std::uint64_t mx, unsigned first, unsigned last) {
        return chem::cost_table_csv(mx, {first, last});
      },
      py::arg("m"), py::arg("first") = 2, py::arg("last") = 64);

  m.def(
      "verify",
      [](const std::string& suite, std::uint64_t seed) {
        chem::VerifyReport r;
        {
          py::gil_scoped_release release;
          r = chem::verify(suite, seed);
        }
        return to_python(r.to_json());
      },
      py::arg("suite") = "all", py::arg("seed") = 1);
}
