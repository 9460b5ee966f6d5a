"""Flask blueprints exposing the numerical core over HTTP."""
