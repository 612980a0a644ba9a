// Copyright 2026 The capres Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef CAPRES_ERRORS_HPP
#define CAPRES_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace capres
{

// Root of the library's exception hierarchy. The CLI maps subclasses onto exit codes.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class GeometryError : public Error
{
public:
  using Error::Error;
};

// A requested size exceeds a configured limit (mesh refinement, iteration caps).
class ResourceLimitError : public Error
{
public:
  using Error::Error;
};

class AssemblyError : public Error
{
public:
  using Error::Error;
};

// Ill-conditioned or non-convergent numerics.
class NumericalError : public Error
{
public:
  using Error::Error;
};

// Input outside the domain of a closed-form expression (poles, non-separated spheres).
class DomainError : public Error
{
public:
  using Error::Error;
};

// Sign-convention resolution found no self-consistent combination.
class ConsistencyError : public Error
{
public:
  using Error::Error;
};

class PreconditionError : public Error
{
public:
  using Error::Error;
};

class ConfigError : public Error
{
public:
  using Error::Error;
};

}  // namespace capres

#endif  // CAPRES_ERRORS_HPP
