/*
 * Copyright 2026 The btp Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef BTP_ERROR_HPP
#define BTP_ERROR_HPP

#include <stdexcept>
#include <string>

namespace btp {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid arguments or configuration supplied by the caller.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Malformed, inconsistent or unreadable data (corpora, models, reports).
class DataError : public Error {
 public:
  using Error::Error;
};

/// A translation / classification / acceptability backend failed or
/// violated the wire protocol.
class BackendError : public Error {
 public:
  using Error::Error;
};

}  // namespace btp

#endif  // BTP_ERROR_HPP
