"""Thin client for the service.

By default the client talks to an in-process instance of the FastAPI app, so
the CLI works with no server running; pass a base URL to talk to a remote
server instead.
"""

from __future__ import annotations

import warnings

import httpx


class ServiceClient:
    def __init__(self, base_url: str | None = None):
        if base_url is None:
            with warnings.catch_warnings():
                # the starlette test client is the supported sync-over-ASGI
                # transport; its deprecation chatter is not actionable here
                warnings.simplefilter("ignore")
                from fastapi.testclient import TestClient

            from .service.app import app

            self._client = TestClient(app, raise_server_exceptions=False)
            self._base = ""
        else:
            self._client = httpx.Client(base_url=base_url, timeout=None)
            self._base = ""

    def post(self, path: str, payload: dict) -> httpx.Response:
        return self._client.post(self._base + path, json=payload)

    def get(self, path: str) -> httpx.Response:
        return self._client.get(self._base + path)

    def close(self):
        self._client.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
