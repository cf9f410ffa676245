//! Objects of a workspace, instantiated over a concrete field.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use ncg_core::algebra::{GradedAlgebra, PresentedAlgebra};
use ncg_core::freealg::{parse_poly, NcPoly, Symbols};
use ncg_core::gbasis::{opposite_presentation, Presentation};
use ncg_core::gmodule::{cyclic_module, direct_sum, free_graded_module, shift_module, GradedAutomorphism, GradedModule};
use ncg_core::homology::Window;
use ncg_core::scalars::{root_of_unity, Field};

use crate::error::CliError;
use crate::workspace::{AlgebraSource, ModuleKind, WorkspaceFile};

/// Command-line overrides applied on top of the workspace.
#[derive(Clone, Debug, Default)]
pub struct Settings {
    pub max_deg: Option<i64>,
    pub window: Option<Window>,
    pub seed: u64,
}

/// Default truncation degree for presented algebras.
pub const DEFAULT_MAX_DEG: i64 = 14;

pub struct Context<F: Field> {
    pub workspace: WorkspaceFile,
    pub field: F,
    pub constants: HashMap<String, F::Elem>,
    pub max_deg: i64,
    pub window: Window,
    pub seed: u64,
    algebras: RefCell<BTreeMap<String, Arc<PresentedAlgebra<F>>>>,
    opposites: RefCell<BTreeMap<String, Arc<PresentedAlgebra<F>>>>,
    modules: RefCell<BTreeMap<String, GradedModule<F>>>,
}

impl<F: Field> Context<F> {
    /// Resolves root symbols over `field`; fails with `NoSuchRoot` when
    /// the field lacks one.
    pub fn new(workspace: WorkspaceFile, field: F, settings: &Settings) -> Result<Self, CliError> {
        let mut constants = HashMap::new();
        if let Some(decl) = &workspace.field {
            for (name, order) in &decl.roots {
                constants.insert(name.clone(), root_of_unity(&field, *order)?);
            }
        }
        let mut window = Window::default();
        if let Some(w) = &workspace.window {
            window = Window::new(
                w.lo.unwrap_or(window.internal_lo),
                w.hi.unwrap_or(window.internal_hi),
                w.homological_max.unwrap_or(window.homological_max),
                w.degree_cap.unwrap_or(window.algebra_degree_cap),
            )?;
        }
        if let Some(w) = settings.window {
            window = w;
        }
        Ok(Context {
            workspace,
            field,
            constants,
            max_deg: settings.max_deg.unwrap_or(DEFAULT_MAX_DEG),
            window,
            seed: settings.seed,
            algebras: RefCell::new(BTreeMap::new()),
            opposites: RefCell::new(BTreeMap::new()),
            modules: RefCell::new(BTreeMap::new()),
        })
    }

    fn unknown(kind: &str, name: &str) -> CliError {
        CliError::Unknown {
            kind: kind.to_string(),
            name: name.to_string(),
        }
    }

    /// Parses an expression in the generators of algebra `alg`.
    pub fn poly(&self, alg: &str, text: &str) -> Result<NcPoly<F>, CliError> {
        let (names, _) = self
            .workspace
            .generators(alg)
            .ok_or_else(|| Self::unknown("algebra", alg))?;
        let sym = Symbols {
            generators: &names,
            constants: &self.constants,
        };
        Ok(parse_poly(&self.field, text, &sym)?)
    }

    pub fn presentation(&self, name: &str) -> Result<Presentation<F>, CliError> {
        let (names, degrees) = self
            .workspace
            .generators(name)
            .ok_or_else(|| Self::unknown("algebra", name))?;
        let rels = self.workspace.relations(name).unwrap_or_default();
        let rels = rels.iter().map(|r| self.poly(name, r)).collect::<Result<Vec<_>, _>>()?;
        Ok(Presentation::new(&self.field, names, degrees, rels)?)
    }

    /// Relations added on top of the base algebra, or all relations.
    pub fn own_relations(&self, name: &str) -> Result<Vec<NcPoly<F>>, CliError> {
        let decl = self.workspace.algebra(name).ok_or_else(|| Self::unknown("algebra", name))?;
        let rels = match &decl.source {
            AlgebraSource::Free { relations, .. } => relations,
            AlgebraSource::Quotient { extra_relations, .. } => extra_relations,
        };
        rels.iter().map(|r| self.poly(name, r)).collect()
    }

    pub fn algebra(&self, name: &str) -> Result<Arc<PresentedAlgebra<F>>, CliError> {
        if let Some(a) = self.algebras.borrow().get(name) {
            return Ok(a.clone());
        }
        let a = Arc::new(PresentedAlgebra::new(&self.presentation(name)?, self.max_deg)?);
        self.algebras.borrow_mut().insert(name.to_string(), a.clone());
        Ok(a)
    }

    pub fn opposite(&self, name: &str) -> Result<Arc<PresentedAlgebra<F>>, CliError> {
        if let Some(a) = self.opposites.borrow().get(name) {
            return Ok(a.clone());
        }
        let pres = opposite_presentation(self.algebra(name)?.presentation());
        let a = Arc::new(PresentedAlgebra::new(&pres, self.max_deg)?);
        self.opposites.borrow_mut().insert(name.to_string(), a.clone());
        Ok(a)
    }

    /// Name of the algebra a module or algebra lives over.
    pub fn algebra_of(&self, name: &str) -> Result<String, CliError> {
        if let Some(m) = self.workspace.module(name) {
            Ok(m.algebra.clone())
        } else if self.workspace.algebra(name).is_some() {
            Ok(name.to_string())
        } else {
            Err(Self::unknown("module", name))
        }
    }

    /// A module by name; an algebra name gives its rank-one free module.
    pub fn module(&self, name: &str) -> Result<GradedModule<F>, CliError> {
        if let Some(m) = self.modules.borrow().get(name) {
            return Ok(m.clone());
        }
        let m = if self.workspace.algebra(name).is_some() {
            let a: Arc<dyn GradedAlgebra<F>> = self.algebra(name)?;
            free_graded_module(a, &[0])?
        } else {
            let decl = self
                .workspace
                .module(name)
                .ok_or_else(|| Self::unknown("module", name))?
                .clone();
            let alg = self.algebra(&decl.algebra)?;
            match &decl.kind {
                ModuleKind::Cyclic { of } => {
                    let gens = of.iter().map(|t| self.poly(&decl.algebra, t)).collect::<Result<Vec<_>, _>>()?;
                    cyclic_module(&alg, &gens)?
                }
                ModuleKind::Free { shifts } => free_graded_module(alg, shifts)?,
                ModuleKind::Sum { of } => {
                    let parts = of
                        .iter()
                        .map(|s| Ok(shift_module(&self.module(&s.name)?, s.shift)))
                        .collect::<Result<Vec<_>, CliError>>()?;
                    let refs: Vec<&GradedModule<F>> = parts.iter().collect();
                    let dyn_alg: Arc<dyn GradedAlgebra<F>> = alg;
                    direct_sum(&dyn_alg, &refs)?
                }
            }
        };
        self.modules.borrow_mut().insert(name.to_string(), m.clone());
        Ok(m)
    }

    /// A module with an optional shift suffix, `M(2)`.
    pub fn shifted_module(&self, spec: &str) -> Result<GradedModule<F>, CliError> {
        let spec = spec.trim();
        match spec.find('(') {
            Some(open) if spec.ends_with(')') => {
                let shift: i64 = spec[open + 1..spec.len() - 1]
                    .trim()
                    .parse()
                    .map_err(|_| CliError::Usage(format!("bad shift in `{spec}`")))?;
                Ok(shift_module(&self.module(spec[..open].trim())?, shift))
            }
            _ => self.module(spec),
        }
    }

    pub fn automorphism(&self, name: &str) -> Result<GradedAutomorphism<F>, CliError> {
        let decl = self
            .workspace
            .automorphism(name)
            .ok_or_else(|| Self::unknown("automorphism", name))?;
        let alg = self.algebra(&decl.algebra)?;
        let images = decl
            .images
            .iter()
            .map(|t| self.poly(&decl.algebra, t))
            .collect::<Result<Vec<_>, _>>()?;
        let check = self.window.algebra_degree_cap.min(alg.valid_through());
        Ok(GradedAutomorphism::new(alg, images, check)?)
    }
}
