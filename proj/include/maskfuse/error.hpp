// Copyright 2026 The maskfuse Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace maskfuse
{

/// Precondition violated by the caller (dimension mismatch, undefined ratio, bad config).
class InvalidArgument : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed or unreadable external input (files, manifests, flags).
class InputError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

}  // namespace maskfuse
