"""
schurlab: Z_n と Z×Z_n 上の Schur 環ツールキット

群環の演算、自己同型、Schur 環オラクル、有限巡回群の列挙・分類、
差集合探索、定理ラボ、CLI を提供します。
"""

from schurlab.config import TOOL_VERSION

__version__ = TOOL_VERSION
