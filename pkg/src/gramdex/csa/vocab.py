"""Token alphabet with reserved sentinel symbols.

Symbol 0 terminates the whole corpus and symbol 1 separates documents, so
no real token ever receives id 0 or 1 and pattern matches cannot span
document boundaries.
"""

from __future__ import annotations

TERMINATOR = 0
SEPARATOR = 1
FIRST_TOKEN_ID = 2


class Vocabulary:
    """Bijective token <-> symbol-id mapping with dense ids from 2 upward."""

    __slots__ = ("_token_to_id", "_id_to_token")

    def __init__(self, tokens: list[str] | None = None):
        self._token_to_id: dict[str, int] = {}
        self._id_to_token: list[str] = []
        for t in tokens or []:
            self.add(t)

    def add(self, token: str) -> int:
        """Return the token's id, assigning the next dense id if new."""
        sym = self._token_to_id.get(token)
        if sym is None:
            sym = FIRST_TOKEN_ID + len(self._id_to_token)
            self._token_to_id[token] = sym
            self._id_to_token.append(token)
        return sym

    def get(self, token: str) -> int | None:
        """Id of a known token, or None."""
        return self._token_to_id.get(token)

    def token(self, symbol: int) -> str:
        if symbol < FIRST_TOKEN_ID or symbol >= self.sigma:
            raise KeyError(f"symbol {symbol} is reserved or unassigned")
        return self._id_to_token[symbol - FIRST_TOKEN_ID]

    @property
    def tokens(self) -> list[str]:
        """Assigned tokens in id order."""
        return list(self._id_to_token)

    @property
    def sigma(self) -> int:
        """Alphabet size including the two sentinels."""
        return FIRST_TOKEN_ID + len(self._id_to_token)

    def __len__(self) -> int:
        return len(self._id_to_token)

    def __contains__(self, token: str) -> bool:
        return token in self._token_to_id

    def __eq__(self, other) -> bool:
        return isinstance(other, Vocabulary) and self._id_to_token == other._id_to_token
