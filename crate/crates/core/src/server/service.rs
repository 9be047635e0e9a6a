//! Request dispatch: one validated command in, one response out.

use std::path::{Path, PathBuf};

use super::procedure::{Procedure, ProcedureRegistry, Template};
use crate::error::{Error, Result};
use crate::model::{Axiom, Change, ClassExpression, EntityKind, EntityName};
use crate::ofn::{parse_class_expression, parse_entity_name};
use crate::protocol::{
    decode_request, parse_command_line, CommandRequest, CommandResponse, Spec, Verb,
};
use crate::reasoner::Relation;
use crate::registry::{Outcome, Query, ReferenceMap};

/// What a successful command produced.
struct Reply {
    outcome: Outcome,
    names: Vec<String>,
    description: String,
}

impl Reply {
    fn of(outcome: Outcome) -> Self {
        Reply {
            outcome,
            names: Vec::new(),
            description: String::new(),
        }
    }
}

pub struct Service {
    registry: ReferenceMap,
    procedures: ProcedureRegistry,
    base_dir: PathBuf,
}

fn entity(arg: &str) -> Result<EntityName> {
    parse_entity_name(arg)
}

fn class(arg: &str) -> Result<ClassExpression> {
    parse_class_expression(arg)
}

fn classes(args: &[String]) -> Result<Vec<ClassExpression>> {
    args.iter().map(|a| class(a)).collect()
}

fn bool_arg(arg: &str) -> Result<bool> {
    match arg {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(Error::Malformed(format!(
            "expected `true` or `false`, found `{arg}`"
        ))),
    }
}

/// Reads the optional `all|direct[+top]` flag of the type queries.
fn type_flag(arg: Option<&String>, allow_top: bool) -> Result<(bool, bool)> {
    let Some(arg) = arg else {
        return Ok((false, false));
    };
    let (mode, top) = match arg.strip_suffix("+top") {
        Some(mode) if allow_top => (mode, true),
        _ => (arg.as_str(), false),
    };
    match mode {
        "all" => Ok((false, top)),
        "direct" => Ok((true, top)),
        _ => Err(Error::Malformed(format!("unknown query flag `{arg}`"))),
    }
}

/// The axiom a manipulation row describes.
fn manipulation_axiom(
    primary: Option<Spec>,
    secondary: Option<Spec>,
    args: &[String],
) -> Result<Axiom> {
    use Spec::*;
    Ok(match (primary, secondary) {
        (Some(Class), None) => Axiom::declare(EntityKind::Class, entity(&args[0])?),
        (Some(Individual), None) => Axiom::declare(EntityKind::Individual, entity(&args[0])?),
        (Some(ObjectProp), None) => Axiom::declare(EntityKind::Role, entity(&args[0])?),
        (Some(Individual), Some(Class)) => {
            Axiom::class_assertion(class(&args[1])?, entity(&args[0])?)
        }
        (Some(Class), Some(Class)) => Axiom::sub_class(class(&args[0])?, class(&args[1])?),
        (Some(ObjectProp), Some(Individual)) => {
            Axiom::property_assertion(entity(&args[0])?, entity(&args[1])?, entity(&args[2])?)
        }
        (Some(ObjectProp), Some(ObjectProp)) => Axiom::SubObjectPropertyOf {
            sub: entity(&args[0])?,
            sup: entity(&args[1])?,
        },
        (Some(Disjoint), Some(Class)) => Axiom::disjoint(classes(args)?)?,
        (Some(Equiv), Some(Class)) => Axiom::equivalent(classes(args)?)?,
        (Some(Domain), Some(ObjectProp)) => Axiom::ObjectPropertyDomain {
            role: entity(&args[0])?,
            domain: class(&args[1])?,
        },
        (Some(Range), Some(ObjectProp)) => Axiom::ObjectPropertyRange {
            role: entity(&args[0])?,
            range: class(&args[1])?,
        },
        _ => return Err(Error::Internal("not a manipulation row".into())),
    })
}

impl Service {
    pub fn new(registry: ReferenceMap, procedures: ProcedureRegistry, base_dir: PathBuf) -> Self {
        Service {
            registry,
            procedures,
            base_dir,
        }
    }

    pub fn registry(&self) -> &ReferenceMap {
        &self.registry
    }

    pub fn procedures(&self) -> &ProcedureRegistry {
        &self.procedures
    }

    /// Decodes one wire line and executes it.
    pub fn handle_line(&self, line: &[u8]) -> CommandResponse {
        match decode_request(line) {
            Ok(req) => self.execute(&req),
            Err(e) => CommandResponse::error(&e, false, 0),
        }
    }

    pub fn execute(&self, req: &CommandRequest) -> CommandResponse {
        match self.run(req) {
            Ok(reply) => {
                let mut resp =
                    CommandResponse::ok(reply.outcome.consistent, reply.outcome.revision)
                        .with_names(reply.names)
                        .with_applied(reply.outcome.applied);
                resp.error_description = reply.description;
                resp
            }
            Err(e) => {
                if matches!(e, Error::Internal(_)) {
                    log::error!("{e} while executing {req:?}");
                }
                let (consistent, revision) = match self.registry.snapshot(&req.reference_name) {
                    Ok(s) => (s.consistent(), s.revision),
                    Err(_) => (false, 0),
                };
                CommandResponse::error(&e, consistent, revision)
            }
        }
    }

    fn path(&self, arg: &str) -> PathBuf {
        let p = Path::new(arg);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    fn query_reply(&self, reference: &str, q: Query) -> Result<Reply> {
        let r = self.registry.query(reference, &q)?;
        Ok(Reply {
            outcome: Outcome {
                consistent: r.consistent,
                applied: false,
                revision: r.revision,
            },
            names: r.names,
            description: String::new(),
        })
    }

    fn current(&self, reference: &str) -> Result<Outcome> {
        let s = self.registry.snapshot(reference)?;
        Ok(Outcome {
            consistent: s.consistent(),
            applied: false,
            revision: s.revision,
        })
    }

    fn run(&self, req: &CommandRequest) -> Result<Reply> {
        use Spec::*;
        let client = req.client_name.as_str();
        let reference = req.reference_name.as_str();
        let args = req.args.as_slice();
        let reg = &self.registry;
        let reply = match (req.command, req.primary_spec, req.secondary_spec) {
            (Verb::Add, p, s) => {
                let ax = manipulation_axiom(p, s, args)?;
                Reply::of(reg.manipulate(client, reference, vec![Change::add(ax)])?)
            }
            (Verb::Remove, p, s) => {
                let ax = manipulation_axiom(p, s, args)?;
                Reply::of(reg.manipulate(client, reference, vec![Change::remove(ax)])?)
            }
            (Verb::Replace, Some(ObjectProp), Some(Individual)) => {
                let (role, subject) = (entity(&args[0])?, entity(&args[1])?);
                let (new, old) = (entity(&args[2])?, entity(&args[3])?);
                let new_ax = Axiom::property_assertion(role.clone(), subject.clone(), new);
                let old_ax = Axiom::property_assertion(role, subject, old);
                let changes = if new_ax == old_ax {
                    vec![Change::add(new_ax)]
                } else {
                    vec![Change::remove(old_ax), Change::add(new_ax)]
                };
                Reply::of(reg.manipulate(client, reference, changes)?)
            }
            (Verb::Query, Some(Ind), Some(Class)) => {
                let (direct, _) = type_flag(args.get(1), false)?;
                let class = class(&args[0])?;
                self.query_reply(reference, Query::Instances { class, direct })?
            }
            (Verb::Query, Some(Class), Some(Ind)) => {
                let (direct, include_top) = type_flag(args.get(1), true)?;
                let individual = entity(&args[0])?;
                self.query_reply(
                    reference,
                    Query::Types {
                        individual,
                        direct,
                        include_top,
                    },
                )?
            }
            (Verb::Query, Some(Class), Some(Class)) => {
                let relation = match args[1].as_str() {
                    "sub" => Relation::Sub,
                    "sup" => Relation::Sup,
                    "equiv" => Relation::Equiv,
                    other => {
                        return Err(Error::Malformed(format!(
                            "expected sub, sup or equiv, found `{other}`"
                        )))
                    }
                };
                let class = class(&args[0])?;
                self.query_reply(reference, Query::Hierarchy { class, relation })?
            }
            (Verb::Query, Some(ObjectProp), Some(Ind)) => {
                let (role, subject) = (entity(&args[0])?, entity(&args[1])?);
                self.query_reply(reference, Query::PropertyValues { role, subject })?
            }
            (Verb::Load, Some(File), None) => {
                Reply::of(reg.load(client, reference, &self.path(&args[0]))?)
            }
            (Verb::Save, Some(File), None) => Reply::of(reg.save(reference, &self.path(&args[0]))?),
            (Verb::Create, None, None) => Reply::of(reg.create(reference, None)?),
            (Verb::Drop, None, None) => {
                let last = self.current(reference)?;
                reg.drop_ref(client, reference)?;
                Reply::of(last)
            }
            (Verb::Mount, None, None) => Reply::of(reg.mount(client, reference)?),
            (Verb::Unmount, None, None) => Reply::of(reg.unmount(client, reference)?),
            (Verb::Unmount, Some(Force), None) => Reply::of(reg.force_unmount(reference)?),
            (Verb::Reason, None, None) => Reply::of(reg.reason(reference)?),
            (Verb::Apply, None, None) => Reply::of(reg.apply(client, reference)?),
            (Verb::Config, Some(Flag), None) => {
                let flag: crate::registry::Flag = args[0].parse()?;
                Reply::of(reg.set_flag(client, reference, flag, bool_arg(&args[1])?)?)
            }
            (Verb::Proc, None, None) => {
                self.run_procedure(client, reference, &args[0], &args[1..])?
            }
            (Verb::Dump, None, None) => {
                let text = reg.dump(reference)?;
                Reply {
                    outcome: self.current(reference)?,
                    names: Vec::new(),
                    description: text,
                }
            }
            _ => {
                return Err(Error::UnknownCommand(format!(
                    "{} has no handler",
                    req.command
                )))
            }
        };
        Ok(reply)
    }

    /// Runs a procedure under a temporary mount held by `client`.
    fn run_procedure(
        &self,
        client: &str,
        reference: &str,
        name: &str,
        args: &[String],
    ) -> Result<Reply> {
        let proc = self.procedures.get(name)?;
        if args.len() != proc.arity() {
            return Err(Error::BadArity(format!(
                "procedure `{name}` takes {} argument(s), got {}",
                proc.arity(),
                args.len()
            )));
        }
        let acquired = self.registry.try_acquire(client, reference)?;
        let result = match proc {
            Procedure::AbstractClass => self.abstract_class(client, reference, &args[0], &args[1]),
            Procedure::Macro(m) => {
                let mut names = Vec::new();
                let mut failure = None;
                for (i, step) in m.body.iter().enumerate() {
                    match self.run_step(client, reference, step, &m.params, args) {
                        Ok(resp) => names.extend(resp.queried_names),
                        Err(reason) => {
                            failure = Some(Error::ProcedureFailed {
                                step: i + 1,
                                reason,
                            });
                            break;
                        }
                    }
                }
                match failure {
                    Some(e) => Err(e),
                    None => {
                        names.sort();
                        names.dedup();
                        Ok(names)
                    }
                }
            }
        };
        if acquired {
            if let Err(e) = self.registry.unmount(client, reference) {
                log::warn!("releasing the procedure mount on `{reference}`: {e}");
            }
        }
        let names = result?;
        Ok(Reply {
            outcome: Outcome {
                applied: true,
                ..self.current(reference)?
            },
            names,
            description: String::new(),
        })
    }

    /// Executes one body line exactly like a client request; the error is
    /// rendered as `<code> <description>`.
    fn run_step(
        &self,
        client: &str,
        reference: &str,
        step: &Template,
        params: &[String],
        args: &[String],
    ) -> std::result::Result<CommandResponse, String> {
        let describe = |e: Error| format!("{} {e}", e.code().code());
        let line = step.instantiate(params, args).map_err(describe)?;
        let cmd = parse_command_line(&line).map_err(describe)?;
        let req = CommandRequest::try_from(cmd.into_wire(client, reference)).map_err(describe)?;
        let resp = self.execute(&req);
        if resp.success {
            Ok(resp)
        } else {
            Err(format!(
                "{} {}",
                resp.error_code.code(),
                resp.error_description
            ))
        }
    }

    /// Defines `new_class` as the conjunction of `∃r.T` over the asserted
    /// property values `(r, o)` of `individual`, where `T` is the
    /// conjunction of the direct types of `o`.
    fn abstract_class(
        &self,
        client: &str,
        reference: &str,
        individual: &str,
        new_class: &str,
    ) -> Result<Vec<String>> {
        let step = |n: usize| {
            move |e: Error| Error::ProcedureFailed {
                step: n,
                reason: format!("{} {e}", e.code().code()),
            }
        };
        let ind = entity(individual).map_err(step(1))?;
        let cls = entity(new_class).map_err(step(1))?;
        if cls.is_reserved() {
            return Err(step(1)(Error::ReservedName(cls.to_string())));
        }
        self.registry.reason(reference).map_err(step(1))?;
        let snap = self.registry.snapshot(reference).map_err(step(1))?;
        let inf = &snap.inference;
        if !inf.is_consistent() {
            return Err(step(1)(Error::InconsistentOntology(reference.to_owned())));
        }
        let assertions = inf.asserted_properties(&ind);
        if assertions.is_empty() {
            return Err(step(1)(Error::UnknownEntity(format!(
                "{ind} has no asserted property values"
            ))));
        }
        let mut conjuncts = Vec::new();
        for (role, filler) in assertions {
            let types: Vec<ClassExpression> = inf
                .types_of(&filler, true, false)
                .map_err(step(1))?
                .into_iter()
                .map(ClassExpression::named)
                .collect();
            let filler_class = match types.len() {
                0 => ClassExpression::Top,
                1 => types.into_iter().next().expect("one type"),
                _ => ClassExpression::intersection(types).expect("two operands"),
            };
            conjuncts.push(ClassExpression::some(role, filler_class));
        }
        conjuncts.sort();
        conjuncts.dedup();
        let definition = if conjuncts.len() == 1 {
            conjuncts.pop().expect("one conjunct")
        } else {
            ClassExpression::intersection(conjuncts).expect("two operands")
        };
        let changes = vec![
            Change::add(Axiom::declare(EntityKind::Class, cls.clone())),
            Change::add(
                Axiom::equivalent(vec![ClassExpression::Named(cls.clone()), definition])
                    .map_err(step(2))?,
            ),
        ];
        self.registry
            .manipulate(client, reference, changes)
            .map_err(step(2))?;
        self.registry.reason(reference).map_err(step(3))?;
        let result = self
            .registry
            .query(
                reference,
                &Query::Instances {
                    class: ClassExpression::Named(cls),
                    direct: false,
                },
            )
            .map_err(step(4))?;
        Ok(result.names)
    }
}
