//! Bit-packed multi-layer toroidal cell grid.

use super::{decide, Decision, RuleParams};
use crate::error::{Error, Result};
use crate::rng::{hash_counter, STREAM_INIT};
use std::io::{BufRead, Write};

/// Rotation sense in screen coordinates (rows grow downward).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RotationDirection {
    Cw,
    Ccw,
}

/// Rotates a 2x2 occupancy `[nw, ne, sw, se]` by 90 degrees.
/// Clockwise sends NW -> NE -> SE -> SW -> NW.
pub fn rotate_block(cells: [bool; 4], dir: RotationDirection) -> [bool; 4] {
    let [nw, ne, sw, se] = cells;
    match dir {
        RotationDirection::Cw => [sw, nw, se, ne],
        RotationDirection::Ccw => [ne, se, nw, sw],
    }
}

/// Initial contents of one layer.
#[derive(Clone, Debug)]
pub enum LayerInit {
    /// Independent fill with the given occupancy probability.
    Density(f64),
    /// Explicit particle positions `(col, row)`.
    Particles(Vec<(u32, u32)>),
}

#[derive(Clone, Debug)]
pub struct GridConfig {
    pub width: u32,
    pub height: u32,
    pub seed: u64,
    /// Cell side length (length units).
    pub dx: f64,
    /// Duration of one step (time units).
    pub dt: f64,
    pub layers: Vec<LayerInit>,
}

impl GridConfig {
    pub fn single_layer(width: u32, height: u32, seed: u64, init: LayerInit) -> Self {
        GridConfig {
            width,
            height,
            seed,
            dx: 1.0,
            dt: 1.0,
            layers: vec![init],
        }
    }
}

/// Bit-packed toroidal grid; 64 cells per word, row-major.
#[derive(Clone, Debug)]
pub struct Grid {
    width: u32,
    height: u32,
    words_per_row: usize,
    layers: Vec<Vec<u64>>,
    time: u64,
    seed: u64,
    dx: f64,
    dt: f64,
}

impl Grid {
    pub fn new(config: &GridConfig) -> Result<Grid> {
        if config.width == 0
            || config.height == 0
            || !config.width.is_multiple_of(2)
            || !config.height.is_multiple_of(2)
        {
            return Err(Error::InvalidParameter(format!(
                "grid dimensions must be even and positive, got {}x{}",
                config.width, config.height
            )));
        }
        if config.layers.is_empty() {
            return Err(Error::InvalidParameter(
                "at least one layer required".into(),
            ));
        }
        if !config.dx.is_finite() || config.dx <= 0.0 || !config.dt.is_finite() || config.dt <= 0.0
        {
            return Err(Error::InvalidParameter(format!(
                "cell size and step duration must be positive, got dx={} dt={}",
                config.dx, config.dt
            )));
        }
        let words_per_row = config.width.div_ceil(64) as usize;
        let mut grid = Grid {
            width: config.width,
            height: config.height,
            words_per_row,
            layers: vec![vec![0u64; words_per_row * config.height as usize]; config.layers.len()],
            time: 0,
            seed: config.seed,
            dx: config.dx,
            dt: config.dt,
        };
        for (idx, init) in config.layers.iter().enumerate() {
            match init {
                LayerInit::Density(rho) => {
                    if !(0.0..=1.0).contains(rho) {
                        return Err(Error::InvalidParameter(format!(
                            "layer density must lie in [0, 1], got {rho}"
                        )));
                    }
                    let threshold = (rho * 18_446_744_073_709_551_616.0) as u128;
                    for row in 0..config.height {
                        for col in 0..config.width {
                            let cell = row as u64 * config.width as u64 + col as u64;
                            let draw = hash_counter(config.seed, STREAM_INIT ^ idx as u64, cell, 0);
                            if (draw as u128) < threshold {
                                grid.set(idx, col, row, true);
                            }
                        }
                    }
                }
                LayerInit::Particles(cells) => {
                    for &(col, row) in cells {
                        if col >= config.width || row >= config.height {
                            return Err(Error::InvalidParameter(format!(
                                "particle ({col}, {row}) outside {}x{} grid",
                                config.width, config.height
                            )));
                        }
                        grid.set(idx, col, row, true);
                    }
                }
            }
        }
        Ok(grid)
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    pub fn time(&self) -> u64 {
        self.time
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    #[inline]
    fn index(&self, col: u32, row: u32) -> (usize, u32) {
        (
            row as usize * self.words_per_row + (col / 64) as usize,
            col % 64,
        )
    }

    #[inline]
    pub fn get(&self, layer: usize, col: u32, row: u32) -> bool {
        let (word, bit) = self.index(col, row);
        self.layers[layer][word] >> bit & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, layer: usize, col: u32, row: u32, value: bool) {
        let (word, bit) = self.index(col, row);
        let w = &mut self.layers[layer][word];
        *w = (*w & !(1u64 << bit)) | ((value as u64) << bit);
    }

    /// Number of particles in a layer.
    pub fn particle_count(&self, layer: usize) -> u64 {
        self.layers[layer]
            .iter()
            .map(|w| w.count_ones() as u64)
            .sum()
    }

    /// Position of the unique particle in a layer; an error otherwise.
    pub fn sole_particle(&self, layer: usize) -> Result<(u32, u32)> {
        if self.particle_count(layer) != 1 {
            return Err(Error::InvalidParameter(format!(
                "layer {layer} holds {} particles, tracking requires exactly 1",
                self.particle_count(layer)
            )));
        }
        for row in 0..self.height {
            for w in 0..self.words_per_row {
                let word = self.layers[layer][row as usize * self.words_per_row + w];
                if word != 0 {
                    return Ok((w as u32 * 64 + word.trailing_zeros(), row));
                }
            }
        }
        unreachable!("count was 1")
    }

    /// Advances every layer one step; `rules` supplies one rule per layer.
    pub fn step(&mut self, rules: &[RuleParams]) -> Result<()> {
        if rules.len() != self.layers.len() {
            return Err(Error::InvalidParameter(format!(
                "{} rules supplied for {} layers",
                rules.len(),
                self.layers.len()
            )));
        }
        let parity = (self.time % 2) as u32;
        let blocks_per_row = self.width / 2;
        for (layer_idx, rule) in rules.iter().enumerate() {
            for brow in 0..self.height / 2 {
                let r0 = (parity + 2 * brow) % self.height;
                let r1 = (r0 + 1) % self.height;
                for bcol in 0..blocks_per_row {
                    let c0 = parity + 2 * bcol;
                    let c1 = (c0 + 1) % self.width;
                    let block = brow as u64 * blocks_per_row as u64 + bcol as u64;
                    let decision = decide(rule, self.seed, layer_idx as u32, self.time, block);
                    let dir = match decision {
                        Decision::Stay => continue,
                        Decision::RotateCw => RotationDirection::Cw,
                        Decision::RotateCcw => RotationDirection::Ccw,
                    };
                    let cells = [
                        self.get(layer_idx, c0, r0),
                        self.get(layer_idx, c1, r0),
                        self.get(layer_idx, c0, r1),
                        self.get(layer_idx, c1, r1),
                    ];
                    let [nw, ne, sw, se] = rotate_block(cells, dir);
                    self.set(layer_idx, c0, r0, nw);
                    self.set(layer_idx, c1, r0, ne);
                    self.set(layer_idx, c0, r1, sw);
                    self.set(layer_idx, c1, r1, se);
                }
            }
        }
        self.time += 1;
        Ok(())
    }

    /// Convenience for single-layer grids.
    pub fn step_single(&mut self, rule: &RuleParams) -> Result<()> {
        self.step(std::slice::from_ref(rule))
    }

    /// Text dump: `MCA <width> <height> <layers>` followed by one 0/1
    /// raster per layer, layers separated by blank lines.
    pub fn write_text<W: Write + ?Sized>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(
            w,
            "MCA {} {} {}",
            self.width,
            self.height,
            self.layers.len()
        )?;
        for layer in 0..self.layers.len() {
            for row in 0..self.height {
                let mut line = String::with_capacity(self.width as usize);
                for col in 0..self.width {
                    line.push(if self.get(layer, col, row) { '1' } else { '0' });
                }
                writeln!(w, "{line}")?;
            }
            if layer + 1 < self.layers.len() {
                writeln!(w)?;
            }
        }
        Ok(())
    }

    /// Parses the text dump format; `seed`, `dx`, `dt` are not part of the
    /// format and must be supplied.
    pub fn read_text<R: BufRead>(r: &mut R, seed: u64, dx: f64, dt: f64) -> Result<Grid> {
        let mut header = String::new();
        r.read_line(&mut header)?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 4 || fields[0] != "MCA" {
            return Err(Error::Parse(format!(
                "expected header 'MCA <width> <height> <layers>', got {header:?}"
            )));
        }
        let parse = |s: &str, what: &str| -> Result<u32> {
            s.parse()
                .map_err(|_| Error::Parse(format!("bad {what}: {s:?}")))
        };
        let width = parse(fields[1], "width")?;
        let height = parse(fields[2], "height")?;
        let layer_count = parse(fields[3], "layer count")? as usize;
        let mut layers = Vec::with_capacity(layer_count);
        for _ in 0..layer_count {
            let mut cells = Vec::new();
            let mut row = 0u32;
            while row < height {
                let mut line = String::new();
                if r.read_line(&mut line)? == 0 {
                    return Err(Error::Parse("unexpected end of file".into()));
                }
                let line = line.trim_end();
                if line.is_empty() {
                    continue;
                }
                if line.len() != width as usize {
                    return Err(Error::Parse(format!(
                        "row {row} has {} cells, expected {width}",
                        line.len()
                    )));
                }
                for (col, ch) in line.chars().enumerate() {
                    match ch {
                        '1' => cells.push((col as u32, row)),
                        '0' => {}
                        _ => {
                            return Err(Error::Parse(format!(
                                "unexpected character {ch:?} in raster"
                            )))
                        }
                    }
                }
                row += 1;
            }
            layers.push(LayerInit::Particles(cells));
        }
        Grid::new(&GridConfig {
            width,
            height,
            seed,
            dx,
            dt,
            layers,
        })
    }
}
