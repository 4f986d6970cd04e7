"""Embedded high-precision reference values.

These tables back the regression commands of the CLI and the test suite:
asymptotic deficit coefficients with their scaled parameter limits, optimal
constructions for small side counts, solved angle profiles, and the area
comparison sweep.  Values are stored exactly as printed in the project's
reference results, rounded at the last displayed digit.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class CoeffRow:
    """One row of the asymptotic table: deficit coefficient and scaled limits.

    ``q`` multiplies pi^3/n^3 in the area deficit of the r-parameter family;
    ``a``, ``b``, ``c`` are the n -> infinity limits of the free parameters
    scaled by n/pi.
    """

    r: int
    q: float
    a: float | None = None
    b: tuple[float, ...] = ()
    c: tuple[float, ...] = ()


ASYMPTOTIC_COEFFS: tuple[CoeffRow, ...] = (
    CoeffRow(0, 0.1458333333333333),
    CoeffRow(1, 0.1164346275953378, 0.6524616592755737),
    CoeffRow(2, 0.1156971503834968, 0.6554858160170336, (1.022718374818576,)),
    CoeffRow(3, 0.1150899130453658, 0.6585214692355722, (1.027063969740726,),
             (0.06794672543480737,)),
    CoeffRow(4, 0.1150687309140004, 0.6586249743177490,
             (1.027209190884176, 1.003828109549754), (0.06761473542307868,)),
    CoeffRow(5, 0.1150557470337394, 0.6586900229138448,
             (1.027300358228207, 1.004461819824590),
             (0.06740615925761905, 0.01028318684355288)),
    CoeffRow(6, 0.1150552764425733, 0.6586923731079715,
             (1.027303650624826, 1.004484647927062, 1.000570284354183),
             (0.06739862447575472, 0.01023212957791077)),
    CoeffRow(7, 0.1150549998390641, 0.6586937593365635,
             (1.027305592742427, 1.004498111789651, 1.000662623065463),
             (0.06739417976638237, 0.01020201310839604, 0.001509019841357918)),
    CoeffRow(8, 0.1150549897593822, 0.6586938098307351,
             (1.027305663478150, 1.004498602162219, 1.000665984979524,
              1.000083456862159),
             (0.06739401787457336, 0.01020091616496605, 0.001501502526879076)),
    CoeffRow(9, 0.1150549838708233, 0.6586938392297916,
             (1.027305704817829, 1.004498888799399, 1.000667949966222,
              1.000096926042045),
             (0.06739392319318871, 0.01020027499791677, 0.001497108650978320,
              0.0002203516777390261)),
    CoeffRow(10, 0.1150549836560699, 0.6586938403067916,
             (1.027305706321311, 1.004498899243624, 1.000668021641018,
              1.000097417195005, 1.000012181578676),
             (0.06739391975105442, 0.01020025160734295, 0.001496948418422726,
              0.0002192534425102402)),
    CoeffRow(11, 0.1150549835307224, 0.6586938408223755,
             (1.027305707189345, 1.004498905348772, 1.000668063456477,
              1.000097703894909, 1.000014146646888),
             (0.06739391767843365, 0.01020023796370542, 0.001496854886068534,
              0.0002186123676843603, 0.00003215289654154845)),
    CoeffRow(12, 0.1150549835261505, 0.6586938408430183,
             (1.027305707214692, 1.004498905576070, 1.000668064981190,
              1.000097714354882, 1.000014218316758, 1.000001777358190),
             (0.06739391761102890, 0.01020023745865263, 0.001496851472990505,
              0.0002185889876955666, 0.00003199263572187769)),
    CoeffRow(13, 0.1150549835234823, 0.6586938407444091,
             (1.027305707207800, 1.004498905698189, 1.000668065875004,
              1.000097720453880, 1.000014260156537, 1.000002064060629),
             (0.06739391752000037, 0.01020023715826531, 0.001496849480792517,
              0.0002185753423198028, 0.00003189910564581757,
              4.691124054714891e-6)),
    CoeffRow(14, 0.1150549835233850, 0.6586938407702582,
             (1.027305707207799, 1.004498905739078, 1.000668065815119,
              1.000097720770217, 1.000014261621179, 1.000002074524450,
              1.000000259301370),
             (0.06739391752829402, 0.01020023716420131, 0.001496849406827393,
              0.0002185748364450190, 0.00003189570671658796,
              4.667741696766253e-6)),
    CoeffRow(15, 0.1150549835233282, 0.6586938406842894,
             (1.027305707182444, 1.004498905675305, 1.000668065987254,
              1.000097720721770, 1.000014262600232, 1.000002080718492,
              1.000000301103361),
             (0.06739391752641309, 0.01020023709721798, 0.001496849396193236,
              0.0002185745506217027, 0.00003189368791732473,
              4.654108249822218e-6, 6.844384307984062e-7)),
    CoeffRow(16, 0.1150549835233261, 0.6586938406334803,
             (1.027305707190814, 1.004498905736593, 1.000668065901726,
              1.000097720834017, 1.000014262573901, 1.000002080858254,
              1.000000302668948, 1.000000037787016),
             (0.06739391746458313, 0.01020023714027207, 0.001496849368106921,
              0.0002185745455879002, 0.00003189363350580009,
              4.653599949365328e-6, 6.810134779486807e-7)),
)

MAX_TABULATED_R = 16


def coeff_row(r: int) -> CoeffRow:
    if not 0 <= r <= MAX_TABULATED_R:
        raise ValueError(f"no tabulated coefficients for r = {r}")
    return ASYMPTOTIC_COEFFS[r]


@dataclass(frozen=True)
class SmallNRow:
    """Optimal construction for small n: area and its free parameters."""

    n: int
    area: float
    alpha: float
    betas: tuple[float, ...] = ()
    gammas: tuple[float, ...] = ()


OPTIMAL_SMALL_N: dict[int, SmallNRow] = {
    6: SmallNRow(6, 0.6749814429301047, 0.3509301888703616),
    8: SmallNRow(8, 0.7268684827516268, 0.2652408674910718, (0.4379295350493946,)),
    10: SmallNRow(10, 0.7491373458778303, 0.2126101953284637,
                  (0.3433714044229845,), (0.02476000789351616,)),
    12: SmallNRow(12, 0.7607298734487962, 0.1770854623284314,
                  (0.2827755557037131, 0.2763754214389234),
                  (0.01982894085863103,)),
}

# Solved angle profiles theta_0..theta_{n/2-1}; the n = 100 row keeps only the
# first eight entries.  Entries reflect the reference solver's tolerance, so
# trailing digits can be off by a unit or two in the softest directions.
SOLVED_ANGLES: dict[int, tuple[float, ...]] = {
    6: (0.350930, 0.653342, 0.566524),
    16: (0.132428, 0.223448, 0.194967, 0.206716,
         0.202285, 0.204013, 0.203359, 0.203580),
    40: (0.0523626, 0.0872236, 0.0764267, 0.0808253,
         0.0791841, 0.0798182, 0.0795763, 0.0796689,
         0.0796334, 0.0796470, 0.0796418, 0.0796437,
         0.0796429, 0.0796432, 0.0796431, 0.0796431,
         0.0796431, 0.0796431, 0.0796431, 0.0796431),
    100: (0.0208046, 0.0345883, 0.0303258, 0.0320589,
          0.0314127, 0.0316612, 0.0315662, 0.0316021),
}


@dataclass(frozen=True)
class AreaRow:
    """Area comparison for one n: regular, reduced families r = 0..4, the
    full program's optimum, and the upper bound.  Missing family entries
    (n < 2r + 4) are None."""

    n: int
    regular: float
    q: tuple[float | None, float | None, float | None, float | None, float | None]
    optimal: float
    upper: float


AREA_COMPARISON: dict[int, AreaRow] = {
    6: AreaRow(6, 0.6495190528, (0.6722882584, 0.6749814429, None, None, None),
               0.6749814429, 0.6877007594),
    8: AreaRow(8, 0.7071067812, (0.7253199909, 0.7268542719, 0.7268684828, None, None),
               0.7268684828, 0.7318815691),
    10: AreaRow(10, 0.7347315654,
                (0.7482573378, 0.7491189262, 0.7491297887, 0.7491373459, None),
                0.7491373459, 0.7516135587),
    12: AreaRow(12, 0.7500000000,
                (0.7601970055, 0.7607153082, 0.7607228359, 0.7607297471, 0.7607298734),
                0.7607298734, 0.7621336536),
    14: AreaRow(14, 0.7592965435,
                (0.7671877750, 0.7675203660, 0.7675256353, 0.7675308404, 0.7675309615),
                0.7675310111, 0.7684036467),
    16: AreaRow(16, 0.7653668647,
                (0.7716285345, 0.7718535572, 0.7718573456, 0.7718611688, 0.7718612660),
                0.7718613220, 0.7724408116),
    18: AreaRow(18, 0.7695453225,
                (0.7746235089, 0.7747824059, 0.7747852057, 0.7747880405, 0.7747881160),
                0.7747881651, 0.7751926059),
    20: AreaRow(20, 0.7725424859,
                (0.7767382147, 0.7768543958, 0.7768565173, 0.7768586570, 0.7768587158),
                0.7768587560, 0.7771522071),
    22: AreaRow(22, 0.7747645313,
                (0.7782865351, 0.7783739622, 0.7783756055, 0.7783772514, 0.7783772976),
                0.7783773302, 0.7785970008),
    24: AreaRow(24, 0.7764571353,
                (0.7794540033, 0.7795213955, 0.7795226929, 0.7795239821, 0.7795240189),
                0.7795240452, 0.7796927566),
    30: AreaRow(30, 0.7796688406,
                (0.7816380102, 0.7816725130, 0.7816732130, 0.7816738921, 0.7816739122),
                0.7816739269, 0.7817597927),
    40: AreaRow(40, 0.7821723252,
                (0.7833076096, 0.7833221318, 0.7833224422, 0.7833227341, 0.7833227431),
                0.7833227495, 0.7833587784),
    50: AreaRow(50, 0.7833327098,
                (0.7840695435, 0.7840769608, 0.7840771244, 0.7840772750, 0.7840772797),
                0.7840772830, 0.7840956746),
    60: AreaRow(60, 0.7839634745,
                (0.7844798073, 0.7844840910, 0.7844841875, 0.7844842749, 0.7844842777),
                0.7844842796, 0.7844949027),
    70: AreaRow(70, 0.7843439529,
                (0.7847256986, 0.7847283918, 0.7847284534, 0.7847285085, 0.7847285103),
                0.7847285115, 0.7847351925),
    80: AreaRow(80, 0.7845909573,
                (0.7848845934, 0.7848863952, 0.7848864368, 0.7848864738, 0.7848864750),
                0.7848864758, 0.7848909473),
    90: AreaRow(90, 0.7847603296,
                (0.7849931681, 0.7849944322, 0.7849944617, 0.7849944876, 0.7849944885),
                0.7849944890, 0.7849976272),
    100: AreaRow(100, 0.7848814941,
                 (0.7850706272, 0.7850715479, 0.7850715695, 0.7850715884, 0.7850715890),
                 0.7850715895, 0.7850738759),
    110: AreaRow(110, 0.7849711494,
                 (0.7851278167, 0.7851285079, 0.7851285242, 0.7851285384, 0.7851285389),
                 0.7851285392, 0.7851302562),
    120: AreaRow(120, 0.7850393436,
                 (0.7851712379, 0.7851717699, 0.7851717826, 0.7851717935, 0.7851717939),
                 0.7851717941, 0.7851731162),
}
