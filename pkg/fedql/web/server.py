#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
In-process HTTP servers for Flask apps, one daemon thread each.
"""

import logging
import threading

from werkzeug.serving import make_server

logger = logging.getLogger(__name__)


class ServerThread:
    """
    A threaded werkzeug server running a Flask app in the background.

    Port 0 binds an ephemeral port; the bound port is available as
    `port` once the server is constructed.
    """

    def __init__(self, app, host: str = "127.0.0.1", port: int = 0):
        self.app = app
        self.host = host
        self._server = make_server(host, port, app, threaded=True)
        self.port = self._server.server_port
        self._thread = threading.Thread(
            target=self._server.serve_forever, name=f"fedql-{app.name}-{self.port}", daemon=True
        )

    @property
    def url(self) -> str:
        return f"http://{self.host}:{self.port}"

    def start(self) -> "ServerThread":
        self._thread.start()
        logger.info(f"{self.app.name} listening on {self.url}")
        return self

    def shutdown(self) -> None:
        """Stop serving and release the port."""
        if self._thread.is_alive():
            self._server.shutdown()
            self._thread.join(timeout=5)
        self._server.server_close()

    def __enter__(self) -> "ServerThread":
        return self.start()

    def __exit__(self, *exc) -> None:
        self.shutdown()

    def __repr__(self) -> str:
        return f"<ServerThread {self.app.name} {self.url}>"
