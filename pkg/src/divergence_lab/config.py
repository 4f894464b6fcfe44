"""配置管理模块。

支持:
- 环境变量配置 (DIVLAB_*)
- 配置文件 (JSON)
- 命令行参数覆盖 (由 CLI 负责)
"""

import json
import os
from pathlib import Path

from pydantic import BaseModel, Field


class SimulationConfig(BaseModel):
    """仿真默认参数，场景 run 块缺省时使用。"""

    default_steps: int = Field(default=2000, ge=1)
    default_seed: int = Field(default=20240611, ge=0)
    default_delta: float = Field(default=0.05, ge=0.0)
    default_horizon: int = Field(default=3, ge=1)


class OutputConfig(BaseModel):
    """输出配置。"""

    directory: str = "runs"
    number_format: str = ".12g"  # 12 位有效数字


class BatchConfig(BaseModel):
    """批量运行 (--seeds a..b) 配置。"""

    max_workers: int = Field(default=4, ge=1)


class Config(BaseModel):
    """全局配置。"""

    simulation: SimulationConfig = Field(default_factory=SimulationConfig)
    output: OutputConfig = Field(default_factory=OutputConfig)
    batch: BatchConfig = Field(default_factory=BatchConfig)

    # 日志级别
    log_level: str = "WARNING"

    @classmethod
    def from_env(cls) -> "Config":
        """从环境变量创建配置。"""
        defaults = SimulationConfig()
        simulation = SimulationConfig(
            default_steps=int(os.getenv("DIVLAB_STEPS", str(defaults.default_steps))),
            default_seed=int(os.getenv("DIVLAB_SEED", str(defaults.default_seed))),
            default_delta=float(os.getenv("DIVLAB_DELTA", str(defaults.default_delta))),
            default_horizon=int(os.getenv("DIVLAB_HORIZON", str(defaults.default_horizon))),
        )

        return cls(
            simulation=simulation,
            output=OutputConfig(directory=os.getenv("DIVLAB_OUT_DIR", "runs")),
            batch=BatchConfig(max_workers=int(os.getenv("DIVLAB_MAX_WORKERS", "4"))),
            log_level=os.getenv("DIVLAB_LOG_LEVEL", "WARNING"),
        )

    @classmethod
    def from_file(cls, path: str | Path) -> "Config":
        """从配置文件加载，文件不存在时返回默认配置。"""
        path = Path(path)
        if not path.exists():
            return cls()

        return cls.model_validate(json.loads(path.read_text(encoding="utf-8")))

    def save(self, path: str | Path) -> None:
        """保存配置到文件。"""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)

        path.write_text(json.dumps(self.model_dump(), indent=2) + "\n", encoding="utf-8")


# 全局配置实例
_config: Config | None = None


def get_config() -> Config:
    """获取全局配置。"""
    global _config
    if _config is None:
        _config = Config.from_env()
    return _config


def set_config(config: Config | None) -> None:
    """设置全局配置，传 None 时下次 get_config() 重新读取环境变量。"""
    global _config
    _config = config
