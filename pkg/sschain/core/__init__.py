# Core: settings, logging, errors and parameter types
